#include "intersample/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "intersample/matexp.hpp"

namespace intersample {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

bool inside(const Eigen::MatrixXd& h, const Eigen::VectorXd& x) {
  return ((h * x).array() <= 1.0).all();
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void check_query(const SystemSpec& s, const QueryPoint& q) {
  if (static_cast<std::size_t>(q.x0.size()) != s.state_dim()) {
    throw DimensionMismatch("query '" + q.label + "': x0 length differs from the state dimension");
  }
  if (static_cast<std::size_t>(q.u0.size()) != s.input_dim()) {
    throw DimensionMismatch("query '" + q.label + "': u0 length differs from the input dimension");
  }
  if (!q.x0.allFinite() || !q.u0.allFinite()) {
    throw std::invalid_argument("query '" + q.label + "': x0 and u0 must be finite");
  }
}

FacetResult skeleton(const SystemSpec& s, std::size_t j) {
  FacetResult r;
  r.j = j;
  r.h = to_vector(s.h.row(static_cast<Eigen::Index>(j)).transpose());
  return r;
}

FacetResult skipped_result(const SystemSpec& s, std::size_t j, double initial) {
  FacetResult r = skeleton(s, j);
  r.f_lower = initial;
  r.verdict = Verdict::Violated;
  r.status = "skipped";
  r.analytic_case = std::string(to_string(AnalyticCase::Kind::None));
  return r;
}

FacetResult error_result(const SystemSpec& s, std::size_t j, std::string message) {
  FacetResult r = skeleton(s, j);
  r.verdict = Verdict::Error;
  r.status = "error";
  r.analytic_case = std::string(to_string(AnalyticCase::Kind::None));
  r.error = std::move(message);
  return r;
}

FacetResult solved_result(const SystemSpec& s, std::size_t j, const SolveReport& rep) {
  FacetResult r = skeleton(s, j);
  r.f_upper = rep.f_upper;
  r.f_lower = rep.f_lower;
  r.gap = rep.gap;
  r.satisfied = rep.f_upper <= 1.0;
  r.verdict = classify(rep.f_upper, rep.f_lower);
  r.bisections = rep.bisections;
  r.convex_ops = rep.convex_ops;
  r.nodes_final = rep.nodes_final;
  r.status = std::string(to_string(rep.status));
  r.witness_t = rep.witness_t;
  r.analytic_case = std::string(to_string(rep.analytic_shortcut.kind));
  r.time_ms = std::chrono::duration<double, std::milli>(rep.wall_time).count();
  return r;
}

struct Task {
  std::size_t query;
  std::size_t j;
  std::size_t slot;
  FacetProblem problem;
};

}  // namespace

void SystemSpec::validate() const {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw DimensionMismatch("A must be a nonempty square matrix");
  if (b.rows() != n || b.cols() == 0) throw DimensionMismatch("B must be n x m with m >= 1");
  if (h.rows() == 0 || h.cols() != n) throw DimensionMismatch("X.H must be p x n with p >= 1");
  if (hu.rows() == 0 || hu.cols() != b.cols()) throw DimensionMismatch("U.H must be q x m with q >= 1");
  if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("dt must be finite and > 0");
  if (!all_finite(a) || !all_finite(b) || !all_finite(h) || !all_finite(hu)) {
    throw std::invalid_argument("system matrices must be finite");
  }
}

Discretization discretize(const SystemSpec& s) {
  s.validate();
  Discretization d;
  d.ahat = point_exp(s.a * s.dt);
  d.bhat.resize(s.a.rows(), s.b.cols());
  for (Eigen::Index i = 0; i < s.b.cols(); ++i) d.bhat.col(i) = augmented_phi(s.a, s.b.col(i), s.dt);
  return d;
}

std::vector<FacetProblem> facet_problems(const SystemSpec& s, const QueryPoint& q) {
  std::vector<FacetProblem> out;
  out.reserve(s.facet_count());
  for (Eigen::Index j = 0; j < s.h.rows(); ++j) {
    out.emplace_back(s.a, s.b, q.x0, q.u0, s.h.row(j).transpose(), s.dt);
  }
  return out;
}

Membership check_membership(const SystemSpec& s, const QueryPoint& q) {
  s.validate();
  check_query(s, q);
  const Discretization d = discretize(s);
  Membership m;
  m.x0_in_x = inside(s.h, q.x0);
  m.u0_in_u = inside(s.hu, q.u0);
  m.successor_in_x = inside(s.h, d.ahat * q.x0 + d.bhat * q.u0);
  return m;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Error: return "error";
  }
  return "error";
}

std::optional<Verdict> parse_verdict(std::string_view name) noexcept {
  for (auto v : {Verdict::Satisfied, Verdict::Violated, Verdict::Inconclusive, Verdict::Error}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

Verdict classify(double f_upper, double f_lower) noexcept {
  if (f_upper <= 1.0) return Verdict::Satisfied;
  if (f_lower > 1.0) return Verdict::Violated;
  return Verdict::Inconclusive;
}

Verdict combine(const std::vector<FacetResult>& facets) noexcept {
  auto any = [&facets](Verdict v) {
    return std::any_of(facets.begin(), facets.end(), [v](const FacetResult& f) { return f.verdict == v; });
  };
  if (any(Verdict::Error)) return Verdict::Error;
  if (any(Verdict::Violated)) return Verdict::Violated;
  if (any(Verdict::Inconclusive)) return Verdict::Inconclusive;
  return Verdict::Satisfied;
}

ConfigEcho echo_of(const VerifyConfig& cfg) {
  ConfigEcho e;
  e.epsilon = cfg.solver.epsilon;
  e.k = cfg.solver.exp.k;
  e.l = cfg.solver.exp.l;
  e.overestimator = std::string(to_string(cfg.solver.overestimator));
  e.max_bisections = cfg.solver.max_bisections;
  e.min_t_width = cfg.solver.min_t_width;
  e.facet = cfg.facet;
  return e;
}

VerificationReport verify_all(const SystemSpec& s, const std::vector<QueryPoint>& queries,
                              const VerifyConfig& cfg, std::vector<FacetTrace>* traces) {
  s.validate();
  cfg.solver.validate();
  if (cfg.facet && *cfg.facet >= s.facet_count()) {
    throw std::out_of_range("facet index " + std::to_string(*cfg.facet) + " out of range (X has " +
                            std::to_string(s.facet_count()) + " rows)");
  }

  VerificationReport report;
  report.config = echo_of(cfg);
  report.queries.resize(queries.size());

  std::vector<Task> tasks;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryPoint& q = queries[qi];
    QueryReport& qr = report.queries[qi];
    qr.label = q.label;
    qr.x0 = to_vector(q.x0);
    qr.u0 = to_vector(q.u0);
    try {
      qr.membership = check_membership(s, q);
    } catch (const std::exception& e) {
      qr.errors.emplace_back(e.what());
      continue;
    }
    for (std::size_t j = 0; j < s.facet_count(); ++j) {
      if (cfg.facet && *cfg.facet != j) continue;
      FacetProblem p(s.a, s.b, q.x0, q.u0, s.h.row(static_cast<Eigen::Index>(j)).transpose(), s.dt);
      if (p.initial_value() > 1.0) {
        qr.facets.push_back(skipped_result(s, j, p.initial_value()));
        continue;
      }
      tasks.push_back(Task{qi, j, qr.facets.size(), std::move(p)});
      qr.facets.push_back(skeleton(s, j));
    }
  }

  std::vector<std::vector<TraceEvent>> task_events(traces ? tasks.size() : 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const Task& task = tasks[i];
      FacetResult& slot = report.queries[task.query].facets[task.slot];
      try {
        if (traces) {
          auto [rep, events] = solve_with_trace(task.problem, cfg.solver);
          slot = solved_result(s, task.j, rep);
          task_events[i] = std::move(events);
        } else {
          slot = solved_result(s, task.j, solve(task.problem, cfg.solver));
        }
      } catch (const std::exception& e) {
        slot = error_result(s, task.j, e.what());
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(tasks.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (QueryReport& qr : report.queries) {
    for (const FacetResult& f : qr.facets) {
      if (f.error) qr.errors.push_back("facet " + std::to_string(f.j) + ": " + *f.error);
    }
    if (!qr.errors.empty() && qr.facets.empty()) {
      qr.verdict = Verdict::Error;
      qr.intersample_ok = false;
      continue;
    }
    qr.verdict = combine(qr.facets);
    qr.intersample_ok = std::all_of(qr.facets.begin(), qr.facets.end(),
                                    [](const FacetResult& f) { return f.satisfied; });
  }

  if (traces) {
    traces->clear();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      traces->push_back(FacetTrace{tasks[i].query, tasks[i].j, std::move(task_events[i])});
    }
  }
  return report;
}

QueryReport verify(const SystemSpec& s, const QueryPoint& q, const VerifyConfig& cfg) {
  return std::move(verify_all(s, {q}, cfg).queries.front());
}

int exit_code(const VerificationReport& report) noexcept {
  bool violated = false;
  bool inconclusive = false;
  for (const QueryReport& q : report.queries) {
    if (q.verdict == Verdict::Error) return 3;
    violated = violated || q.verdict == Verdict::Violated;
    inconclusive = inconclusive || q.verdict == Verdict::Inconclusive;
  }
  if (violated) return 1;
  if (inconclusive) return 2;
  return 0;
}

SampleTable sample_outputs(const SystemSpec& s, const QueryPoint& q, std::size_t facet_index, std::size_t n) {
  s.validate();
  check_query(s, q);
  if (n < 2) throw std::invalid_argument("at least 2 samples are needed");
  if (facet_index >= s.facet_count()) {
    throw std::out_of_range("facet index " + std::to_string(facet_index) + " out of range");
  }
  const FacetProblem p(s.a, s.b, q.x0, q.u0, s.h.row(static_cast<Eigen::Index>(facet_index)).transpose(), s.dt);
  SampleTable table;
  table.t.resize(n);
  table.f.resize(n);
  table.states.resize(static_cast<Eigen::Index>(n), s.a.rows());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? s.dt : s.dt * static_cast<double>(i) / static_cast<double>(n - 1);
    table.t[i] = t;
    table.f[i] = eval_f(p, t);
    const Eigen::VectorXd x = point_exp(s.a * t) * q.x0 + augmented_phi(s.a, s.b * q.u0, t);
    table.states.row(static_cast<Eigen::Index>(i)) = x.transpose();
  }
  return table;
}

}  // namespace intersample
