#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "intersample/facet.hpp"
#include "intersample/interval.hpp"
#include "intersample/matexp.hpp"
#include "intersample/overestimators.hpp"

namespace intersample {

class ConfigInvalid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolverConfig {
  double epsilon = 1e-6;
  ExpParams exp{10, 10};
  OverestimatorKind overestimator = OverestimatorKind::PiecewiseQuadratic;
  std::size_t max_bisections = 100000;
  /// Smallest time-interval width that may still be bisected; 2^-40 dt when unset.
  std::optional<double> min_t_width;
  /// Use the closed forms for constant f and eigenvector h before branching.
  bool use_shortcuts = true;
  double eigen_tolerance = 1e-10;

  /// Throws ConfigInvalid for a non-positive epsilon or width floor.
  void validate() const;
};

/// A time interval and bounds on the local maximum of f over it. Unprocessed
/// nodes carry the unbounded sentinel.
struct NodeTuple {
  Interval t;
  Interval fdagger = Interval::unbounded();
  std::uint64_t insertion_seq = 0;
  double witness_t = 0.0;
  double parent_upper = std::numeric_limits<double>::infinity();

  bool processed() const noexcept { return !fdagger.is_unbounded(); }
};

enum class SolveStatus { EpsOptimal, BudgetExhausted, WidthFloor };
std::string_view to_string(SolveStatus status) noexcept;
std::optional<SolveStatus> parse_solve_status(std::string_view name) noexcept;

/// How a node's local maximum was bounded.
enum class NodeBranch { Increasing, Decreasing, Convex, Concave, Overestimated };
std::string_view to_string(NodeBranch branch) noexcept;

struct SolveReport {
  double f_upper = 0.0;
  double f_lower = 0.0;
  double gap = 0.0;
  std::size_t bisections = 0;
  std::size_t convex_ops = 0;
  std::size_t nodes_final = 0;
  SolveStatus status = SolveStatus::EpsOptimal;
  double witness_t = 0.0;  // f(witness_t) == f_lower
  AnalyticCase analytic_shortcut;
  std::chrono::duration<double> wall_time{0.0};
};

/// One processed node.
struct TraceEvent {
  std::size_t sweep = 0;  // 0 for the root sweep, then one per bisection
  std::uint64_t node_seq = 0;
  Interval t;
  Interval fprime;
  Interval fsecond;
  NodeBranch branch = NodeBranch::Overestimated;
  Interval fdagger;
  double t_dagger = 0.0;
  double f_lower = 0.0;  // global lower bound after this node
  std::optional<OverestimatorParams> overestimator;
};

/// Branch and bound for max_{t in [0, dt]} f(t) to absolute tolerance epsilon.
///
/// Each unprocessed node gets derivative enclosures and is classified as
/// non-decreasing, non-increasing, convex, concave (golden section, one
/// convex OP) or bounded by the configured overestimator. The loop stops once
/// f_upper - f_lower <= epsilon; otherwise dominated nodes whose bound width
/// exceeds epsilon are pruned and the node with the widest bound is bisected
/// (ties go to the oldest node).
///
/// Throws ConfigInvalid when 2^l (k+2) <= ||A [0, dt]||_inf or the config is invalid.
SolveReport solve(const FacetProblem& p, const SolverConfig& cfg);

std::pair<SolveReport, std::vector<TraceEvent>> solve_with_trace(const FacetProblem& p,
                                                                 const SolverConfig& cfg);

}  // namespace intersample
