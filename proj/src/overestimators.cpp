#include "intersample/overestimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace intersample {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;  // (sqrt(5) - 1) / 2
constexpr int kMaxGoldenIterations = 400;

void require_width(const Interval& tint) {
  if (tint.is_unbounded() || !(tint.hi() > tint.lo())) {
    throw HypothesisViolated("overestimator needs a time interval of positive width, got " + to_string(tint));
  }
}

double default_scale(const Interval& tint) {
  return std::max({std::fabs(tint.lo()), std::fabs(tint.hi()), tint.hi() - tint.lo()});
}

double clamp_to(const Interval& tint, double t) { return std::clamp(t, tint.lo(), tint.hi()); }

}  // namespace

std::string_view to_string(OverestimatorKind kind) noexcept {
  switch (kind) {
    case OverestimatorKind::PiecewiseAffine: return "pwa";
    case OverestimatorKind::PiecewiseQuadratic: return "pwq";
    case OverestimatorKind::ConcaveShift: return "concave";
  }
  return "pwq";
}

std::optional<OverestimatorKind> parse_overestimator(std::string_view name) noexcept {
  if (name == "pwa" || name == "1") return OverestimatorKind::PiecewiseAffine;
  if (name == "pwq" || name == "2") return OverestimatorKind::PiecewiseQuadratic;
  if (name == "concave" || name == "3") return OverestimatorKind::ConcaveShift;
  return std::nullopt;
}

UnivariateObjective objective_of(const FacetProblem& p) {
  return UnivariateObjective{[&p](double t) { return eval_f(p, t); },
                             [&p](double t) { return eval_f_prime(p, t); }};
}

double concave_tolerance(const Interval& tint, double dt) noexcept {
  const double eps_scale =
      4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(tint.lo()), std::fabs(tint.hi()));
  return std::max(1e-12 * dt, eps_scale);
}

ConcaveMaximum concave_max(const std::function<double(double)>& g, const Interval& tint, double tol_t,
                           std::optional<double> curvature_bound) {
  double a = tint.lo();
  double b = tint.hi();
  ConcaveMaximum best{a, g(a), 0.0};
  auto consider = [&best](double t, double value) {
    if (value > best.value) best = {t, value, 0.0};
  };
  if (b > a) {
    consider(b, g(b));
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double g1 = g(x1);
    double g2 = g(x2);
    consider(x1, g1);
    consider(x2, g2);
    for (int it = 0; it < kMaxGoldenIterations && b - a > tol_t && x1 < x2; ++it) {
      if (g1 < g2) {
        a = x1;
        x1 = x2;
        g1 = g2;
        x2 = a + kInvPhi * (b - a);
        g2 = g(x2);
        consider(x2, g2);
      } else {
        b = x2;
        x2 = x1;
        g2 = g1;
        x1 = b - kInvPhi * (b - a);
        g1 = g(x1);
        consider(x1, g1);
      }
    }
    const double m = 0.5 * (a + b);
    consider(m, g(m));
  }
  double pad = 1e-12 * std::max(1.0, std::fabs(best.value));
  if (curvature_bound) pad += std::fabs(*curvature_bound) * tol_t * tol_t / 8.0;
  best.upper_bound = best.value + pad;
  return best;
}

Overestimator Overestimator::piecewise_affine(const UnivariateObjective& f, const Interval& tint,
                                              const Interval& fprime) {
  require_width(tint);
  if (!(fprime.lo() < 0.0 && 0.0 < fprime.hi())) {
    throw HypothesisViolated("piecewise affine bound needs inf f' < 0 < sup f', got " + to_string(fprime));
  }
  Overestimator g;
  g.kind_ = OverestimatorKind::PiecewiseAffine;
  g.f_ = f;
  g.tint_ = tint;
  g.f_lo_ = f.value(tint.lo());
  g.f_hi_ = f.value(tint.hi());
  g.slope_lo_ = fprime.lo();
  g.slope_hi_ = fprime.hi();
  const double tc = (g.slope_hi_ * tint.lo() - g.slope_lo_ * tint.hi() + g.f_hi_ - g.f_lo_) /
                    (g.slope_hi_ - g.slope_lo_);
  g.t_c_ = clamp_to(tint, tc);
  return g;
}

Overestimator Overestimator::piecewise_quadratic(const UnivariateObjective& f, const Interval& tint,
                                                 const Interval& fsecond) {
  require_width(tint);
  if (!(fsecond.hi() > 0.0)) {
    throw HypothesisViolated("piecewise quadratic bound needs sup f'' > 0, got " + to_string(fsecond));
  }
  Overestimator g;
  g.kind_ = OverestimatorKind::PiecewiseQuadratic;
  g.f_ = f;
  g.tint_ = tint;
  g.f_lo_ = f.value(tint.lo());
  g.f_hi_ = f.value(tint.hi());
  g.df_lo_ = f.derivative(tint.lo());
  g.df_hi_ = f.derivative(tint.hi());
  g.curvature_ = fsecond.hi();

  const double w = tint.hi() - tint.lo();
  const double secant = (g.df_hi_ - g.df_lo_) / w;
  if (secant < g.curvature_) {
    // intersection of the two quadratics, in coordinates shifted to t_lo
    const double denom = g.curvature_ * w + g.df_lo_ - g.df_hi_;
    const double tau = (g.f_hi_ - g.f_lo_ - g.df_hi_ * w + 0.5 * g.curvature_ * w * w) / denom;
    g.t_c_ = denom > 0.0 ? clamp_to(tint, tint.lo() + tau) : tint.hi();
  } else {
    g.t_c_ = tint.hi();
  }
  return g;
}

Overestimator Overestimator::concave_shift(const UnivariateObjective& f, const Interval& tint,
                                           const Interval& fsecond) {
  require_width(tint);
  if (!(fsecond.hi() > 0.0)) {
    throw HypothesisViolated("concave shift bound needs sup f'' > 0, got " + to_string(fsecond));
  }
  Overestimator g;
  g.kind_ = OverestimatorKind::ConcaveShift;
  g.f_ = f;
  g.tint_ = tint;
  g.curvature_ = fsecond.hi();
  g.curvature_width_ = fsecond.hi() - fsecond.lo();
  g.t_c_ = std::numeric_limits<double>::quiet_NaN();
  return g;
}

double Overestimator::left_piece(double t) const {
  const double s = t - tint_.lo();
  if (kind_ == OverestimatorKind::PiecewiseAffine) return f_lo_ + slope_hi_ * s;
  return f_lo_ + df_lo_ * s + 0.5 * curvature_ * s * s;
}

double Overestimator::right_piece(double t) const {
  const double s = tint_.hi() - t;
  if (kind_ == OverestimatorKind::PiecewiseAffine) return f_hi_ - slope_lo_ * s;
  return f_hi_ - df_hi_ * s + 0.5 * curvature_ * s * s;
}

double Overestimator::operator()(double t) const {
  if (kind_ == OverestimatorKind::ConcaveShift) {
    return f_.value(t) + 0.5 * curvature_ * (t - tint_.lo()) * (tint_.hi() - t);
  }
  return t <= t_c_ ? left_piece(t) : right_piece(t);
}

OverestimatorParams Overestimator::parameters() const noexcept {
  OverestimatorParams out;
  out.kind = kind_;
  out.t_lo = tint_.lo();
  out.t_hi = tint_.hi();
  out.f_lo = f_lo_;
  out.f_hi = f_hi_;
  out.df_lo = df_lo_;
  out.df_hi = df_hi_;
  out.slope_lo = slope_lo_;
  out.slope_hi = slope_hi_;
  out.curvature = curvature_;
  out.t_c = kind_ == OverestimatorKind::ConcaveShift ? 0.0 : t_c_;
  return out;
}

BoundCertificate Overestimator::maximize(double tol_t) const {
  BoundCertificate cert;
  switch (kind_) {
    case OverestimatorKind::PiecewiseAffine: {
      cert.t_dagger = t_c_;
      // both pieces agree at t_c in exact arithmetic; keep the larger
      cert.g_value = std::max(left_piece(t_c_), right_piece(t_c_));
      cert.f_value = f_.value(t_c_);
      break;
    }
    case OverestimatorKind::PiecewiseQuadratic: {
      const double candidates[3] = {tint_.lo(), t_c_, tint_.hi()};
      double best_t = candidates[0];
      double best_g = -std::numeric_limits<double>::infinity();
      for (double t : candidates) {
        double value = (*this)(t);
        if (t == t_c_ && t_c_ < tint_.hi()) value = std::max(left_piece(t), right_piece(t));
        if (value > best_g) {
          best_g = value;
          best_t = t;
        }
      }
      cert.t_dagger = best_t;
      cert.g_value = best_g;
      cert.f_value = f_.value(best_t);
      break;
    }
    case OverestimatorKind::ConcaveShift: {
      const ConcaveMaximum m =
          concave_max([this](double t) { return (*this)(t); }, tint_, tol_t, curvature_width_);
      cert.t_dagger = m.t;
      cert.g_value = m.upper_bound;
      cert.f_value = f_.value(m.t);
      cert.convex_op_used = true;
      break;
    }
  }
  cert.g_value = std::max(cert.g_value, cert.f_value);
  return cert;
}

BoundCertificate bound_type1(const UnivariateObjective& f, const Interval& tint, const Interval& fprime) {
  return Overestimator::piecewise_affine(f, tint, fprime).maximize(concave_tolerance(tint, default_scale(tint)));
}

BoundCertificate bound_type2(const UnivariateObjective& f, const Interval& tint, const Interval& fsecond) {
  return Overestimator::piecewise_quadratic(f, tint, fsecond)
      .maximize(concave_tolerance(tint, default_scale(tint)));
}

BoundCertificate bound_type3(const UnivariateObjective& f, const Interval& tint, const Interval& fsecond) {
  return Overestimator::concave_shift(f, tint, fsecond).maximize(concave_tolerance(tint, default_scale(tint)));
}

BoundCertificate bound_type1(const FacetProblem& p, const Interval& tint, const Interval& fprime) {
  return Overestimator::piecewise_affine(objective_of(p), tint, fprime)
      .maximize(concave_tolerance(tint, p.dt()));
}

BoundCertificate bound_type2(const FacetProblem& p, const Interval& tint, const Interval& fsecond) {
  return Overestimator::piecewise_quadratic(objective_of(p), tint, fsecond)
      .maximize(concave_tolerance(tint, p.dt()));
}

BoundCertificate bound_type3(const FacetProblem& p, const Interval& tint, const Interval& fsecond) {
  return Overestimator::concave_shift(objective_of(p), tint, fsecond).maximize(concave_tolerance(tint, p.dt()));
}

}  // namespace intersample
