#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "intersample/bnb.hpp"
#include "intersample/facet.hpp"

namespace intersample {

/// Continuous-time system x' = A x + B u sampled every dt, with state
/// constraints {x : H x <= 1} and input constraints {u : Hu u <= 1}.
struct SystemSpec {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  double dt = 0.0;
  Eigen::MatrixXd h;
  Eigen::MatrixXd hu;

  std::size_t state_dim() const noexcept { return static_cast<std::size_t>(a.rows()); }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(b.cols()); }
  std::size_t facet_count() const noexcept { return static_cast<std::size_t>(h.rows()); }

  /// Throws DimensionMismatch or std::invalid_argument.
  void validate() const;
};

struct QueryPoint {
  Eigen::VectorXd x0;
  Eigen::VectorXd u0;
  std::string label;
};

struct Discretization {
  Eigen::MatrixXd ahat;  // exp(A dt)
  Eigen::MatrixXd bhat;  // int_0^dt exp(A tau) dtau B
};

Discretization discretize(const SystemSpec& s);

/// One problem per row of H, in row order.
std::vector<FacetProblem> facet_problems(const SystemSpec& s, const QueryPoint& q);

struct Membership {
  bool x0_in_x = false;
  bool u0_in_u = false;
  bool successor_in_x = false;  // Ahat x0 + Bhat u0 in X

  bool operator==(const Membership&) const = default;
};

Membership check_membership(const SystemSpec& s, const QueryPoint& q);

enum class Verdict { Satisfied, Violated, Inconclusive, Error };
std::string_view to_string(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view name) noexcept;

/// Solver outcome for one facet, flattened for reporting.
///
/// A facet with h^T x0 > 1 is violated at t = 0 and is not solved: status is
/// "skipped", f_lower = h^T x0 and f_upper / gap are empty. A facet whose
/// solve threw has status "error" and the message in `error`.
struct FacetResult {
  std::size_t j = 0;
  std::vector<double> h;
  std::optional<double> f_upper;
  double f_lower = 0.0;
  std::optional<double> gap;
  bool satisfied = false;  // f_upper <= 1
  Verdict verdict = Verdict::Inconclusive;
  std::size_t bisections = 0;
  std::size_t convex_ops = 0;
  std::size_t nodes_final = 0;
  std::string status;  // eps_optimal | budget_exhausted | width_floor | skipped | error
  double witness_t = 0.0;
  std::string analytic_case;
  double time_ms = 0.0;
  std::optional<std::string> error;

  bool operator==(const FacetResult&) const = default;
};

struct QueryReport {
  std::string label;
  std::vector<double> x0;
  std::vector<double> u0;
  Membership membership;
  std::vector<FacetResult> facets;
  bool intersample_ok = false;  // every reported facet satisfied
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> errors;

  bool operator==(const QueryReport&) const = default;
};

struct VerifyConfig {
  SolverConfig solver;
  std::optional<std::size_t> facet;  // restrict to one row of H
  std::size_t jobs = 1;
};

/// Solver settings echoed into the report.
struct ConfigEcho {
  double epsilon = 0.0;
  unsigned k = 0;
  unsigned l = 0;
  std::string overestimator;
  std::size_t max_bisections = 0;
  std::optional<double> min_t_width;
  std::optional<std::size_t> facet;

  bool operator==(const ConfigEcho&) const = default;
};

ConfigEcho echo_of(const VerifyConfig& cfg);

struct VerificationReport {
  ConfigEcho config;
  std::vector<QueryReport> queries;

  bool operator==(const VerificationReport&) const = default;
};

struct FacetTrace {
  std::size_t query = 0;
  std::size_t j = 0;
  std::vector<TraceEvent> events;
};

/// Facet verdict: satisfied iff f_upper <= 1, violated iff f_lower > 1.
Verdict classify(double f_upper, double f_lower) noexcept;

/// Query verdict: any error, else any violation, else any inconclusive facet, else satisfied.
Verdict combine(const std::vector<FacetResult>& facets) noexcept;

QueryReport verify(const SystemSpec& s, const QueryPoint& q, const VerifyConfig& cfg);

/// Verifies every query. Facet solves run on up to cfg.jobs threads; the
/// report does not depend on the thread count. When traces is given it
/// receives one entry per solved facet, ordered by (query, j).
VerificationReport verify_all(const SystemSpec& s, const std::vector<QueryPoint>& queries,
                              const VerifyConfig& cfg, std::vector<FacetTrace>* traces = nullptr);

/// 0 all satisfied, 1 certified violation, 2 inconclusive, 3 error.
int exit_code(const VerificationReport& report) noexcept;

struct SampleTable {
  std::vector<double> t;
  std::vector<double> f;
  Eigen::MatrixXd states;  // one row per sample
};

/// N >= 2 uniform samples of f and of the state on [0, dt]; both end points included.
SampleTable sample_outputs(const SystemSpec& s, const QueryPoint& q, std::size_t facet_index, std::size_t n);

}  // namespace intersample
