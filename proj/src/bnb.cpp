#include "intersample/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace intersample {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::EpsOptimal: return "eps_optimal";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    case SolveStatus::WidthFloor: return "width_floor";
  }
  return "eps_optimal";
}

std::optional<SolveStatus> parse_solve_status(std::string_view name) noexcept {
  for (auto s : {SolveStatus::EpsOptimal, SolveStatus::BudgetExhausted, SolveStatus::WidthFloor}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(NodeBranch branch) noexcept {
  switch (branch) {
    case NodeBranch::Increasing: return "increasing";
    case NodeBranch::Decreasing: return "decreasing";
    case NodeBranch::Convex: return "convex";
    case NodeBranch::Concave: return "concave";
    case NodeBranch::Overestimated: return "overestimated";
  }
  return "overestimated";
}

void SolverConfig::validate() const {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw ConfigInvalid("epsilon must be finite and > 0");
  if (min_t_width && !(*min_t_width > 0.0)) throw ConfigInvalid("min_t_width must be > 0");
}

namespace {

class Solver {
 public:
  Solver(const FacetProblem& p, const SolverConfig& cfg, std::vector<TraceEvent>* trace)
      : p_(p), cfg_(cfg), trace_(trace), f_(objective_of(p)) {}

  SolveReport run() {
    const auto started = std::chrono::steady_clock::now();
    cfg_.validate();
    const double root_norm = root_argument_norm(p_);
    if (!cfg_.exp.admits(root_norm)) {
      std::ostringstream os;
      os.precision(17);
      os << "2^l (k+2) = " << std::ldexp(cfg_.exp.k + 2.0, static_cast<int>(cfg_.exp.l))
         << " does not exceed ||A [0, dt]||_inf = " << root_norm << "; use l >= "
         << minimal_scaling(root_norm, cfg_.exp.k);
      throw ConfigInvalid(os.str());
    }

    SolveReport report;
    report.analytic_shortcut = detect_analytic_case(p_, cfg_.eigen_tolerance);
    if (cfg_.use_shortcuts && shortcut(report)) {
      report.wall_time = std::chrono::steady_clock::now() - started;
      return report;
    }

    branch_and_bound(report);
    report.wall_time = std::chrono::steady_clock::now() - started;
    return report;
  }

 private:
  const FacetProblem& p_;
  const SolverConfig& cfg_;
  std::vector<TraceEvent>* trace_;
  UnivariateObjective f_;

  std::vector<NodeTuple> nodes_;
  std::uint64_t next_seq_ = 0;
  double f_lower_ = 0.0;
  double witness_t_ = 0.0;
  std::size_t convex_ops_ = 0;
  std::size_t sweep_ = 0;

  bool shortcut(SolveReport& report) const {
    using Kind = AnalyticCase::Kind;
    const AnalyticCase& ac = report.analytic_shortcut;
    if (ac.kind != Kind::ConstantF && ac.kind != Kind::EigenvectorH) return false;
    const PointMaximum m = ac.kind == Kind::ConstantF ? PointMaximum{0.0, p_.initial_value()}
                                                      : solve_eigenvector_case(p_, ac.lambda);
    report.f_upper = m.value;
    report.f_lower = m.value;
    report.gap = 0.0;
    report.witness_t = m.t;
    report.nodes_final = 0;
    report.status = SolveStatus::EpsOptimal;
    return true;
  }

  void process(NodeTuple& node) {
    const Interval& t = node.t;
    const DerivativeBounds d = derivative_inclusions(p_, t, cfg_.exp);
    TraceEvent event;
    event.sweep = sweep_;
    event.node_seq = node.insertion_seq;
    event.t = t;
    event.fprime = d.first;
    event.fsecond = d.second;

    double lo = 0.0;
    double hi = 0.0;
    double witness = t.lo();
    if (d.first.lo() >= 0.0) {
      event.branch = NodeBranch::Increasing;
      lo = hi = f_.value(t.hi());
      witness = t.hi();
    } else if (d.first.hi() <= 0.0) {
      event.branch = NodeBranch::Decreasing;
      lo = hi = f_.value(t.lo());
      witness = t.lo();
    } else if (d.second.lo() >= 0.0) {
      event.branch = NodeBranch::Convex;
      const double at_lo = f_.value(t.lo());
      const double at_hi = f_.value(t.hi());
      witness = at_hi > at_lo ? t.hi() : t.lo();
      lo = hi = std::max(at_lo, at_hi);
    } else if (d.second.hi() <= 0.0) {
      event.branch = NodeBranch::Concave;
      const ConcaveMaximum m =
          concave_max(f_.value, t, concave_tolerance(t, p_.dt()), magnitude(d.second));
      ++convex_ops_;
      lo = m.value;
      hi = m.upper_bound;
      witness = m.t;
    } else {
      event.branch = NodeBranch::Overestimated;
      const Overestimator g = make_overestimator(t, d);
      const BoundCertificate cert = g.maximize(concave_tolerance(t, p_.dt()));
      if (cert.convex_op_used) ++convex_ops_;
      lo = cert.f_value;
      hi = cert.g_value;
      witness = cert.t_dagger;
      event.overestimator = g.parameters();
    }
    // A parent's bound stays valid on its halves.
    hi = std::max(lo, std::min(hi, node.parent_upper));
    node.fdagger = Interval(lo, hi);
    node.witness_t = witness;

    if (lo > f_lower_) {
      f_lower_ = lo;
      witness_t_ = witness;
    }
    if (trace_) {
      event.fdagger = node.fdagger;
      event.t_dagger = witness;
      event.f_lower = f_lower_;
      trace_->push_back(event);
    }
  }

  Overestimator make_overestimator(const Interval& t, const DerivativeBounds& d) const {
    switch (cfg_.overestimator) {
      case OverestimatorKind::PiecewiseAffine: return Overestimator::piecewise_affine(f_, t, d.first);
      case OverestimatorKind::PiecewiseQuadratic: return Overestimator::piecewise_quadratic(f_, t, d.second);
      case OverestimatorKind::ConcaveShift: return Overestimator::concave_shift(f_, t, d.second);
    }
    return Overestimator::piecewise_quadratic(f_, t, d.second);
  }

  void branch_and_bound(SolveReport& report) {
    const double min_width = cfg_.min_t_width.value_or(std::ldexp(p_.dt(), -40));
    f_lower_ = p_.initial_value();
    witness_t_ = 0.0;
    nodes_.push_back(NodeTuple{Interval(0.0, p_.dt()), Interval::unbounded(), next_seq_++});

    std::size_t bisections = 0;
    double f_upper = 0.0;
    for (;;) {
      for (auto& node : nodes_) {
        if (!node.processed()) process(node);
      }

      f_upper = -std::numeric_limits<double>::infinity();
      for (const auto& node : nodes_) f_upper = std::max(f_upper, node.fdagger.hi());
      f_upper = std::max(f_upper, f_lower_);

      if (f_upper - f_lower_ <= cfg_.epsilon) {
        report.status = SolveStatus::EpsOptimal;
        break;
      }

      const double fl = f_lower_;
      const double eps = cfg_.epsilon;
      std::erase_if(nodes_, [fl, eps](const NodeTuple& n) {
        return n.fdagger.hi() <= fl && width(n.fdagger) > eps;
      });

      auto selected = std::max_element(nodes_.begin(), nodes_.end(), [](const NodeTuple& a, const NodeTuple& b) {
        const double wa = width(a.fdagger);
        const double wb = width(b.fdagger);
        if (wa != wb) return wa < wb;
        return a.insertion_seq > b.insertion_seq;
      });

      if (bisections >= cfg_.max_bisections) {
        report.status = SolveStatus::BudgetExhausted;
        break;
      }
      const Interval t = selected->t;
      const double mid = 0.5 * (t.lo() + t.hi());
      if (0.5 * (t.hi() - t.lo()) < min_width || !(t.lo() < mid && mid < t.hi())) {
        report.status = SolveStatus::WidthFloor;
        break;
      }
      const double parent_upper = selected->fdagger.hi();
      nodes_.erase(selected);
      nodes_.push_back(NodeTuple{Interval(t.lo(), mid), Interval::unbounded(), next_seq_++, 0.0, parent_upper});
      nodes_.push_back(NodeTuple{Interval(mid, t.hi()), Interval::unbounded(), next_seq_++, 0.0, parent_upper});
      ++bisections;
      ++sweep_;
    }

    report.f_upper = f_upper;
    report.f_lower = f_lower_;
    report.gap = f_upper - f_lower_;
    report.bisections = bisections;
    report.convex_ops = convex_ops_;
    report.nodes_final = nodes_.size();
    report.witness_t = witness_t_;
  }
};

}  // namespace

SolveReport solve(const FacetProblem& p, const SolverConfig& cfg) { return Solver(p, cfg, nullptr).run(); }

std::pair<SolveReport, std::vector<TraceEvent>> solve_with_trace(const FacetProblem& p, const SolverConfig& cfg) {
  std::vector<TraceEvent> trace;
  SolveReport report = Solver(p, cfg, &trace).run();
  return {report, std::move(trace)};
}

}  // namespace intersample
