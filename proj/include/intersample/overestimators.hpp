#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "intersample/facet.hpp"
#include "intersample/interval.hpp"

namespace intersample {

/// Which upper bounding function the solver builds on undecided nodes.
enum class OverestimatorKind {
  PiecewiseAffine = 1,     // slopes from [f']
  PiecewiseQuadratic = 2,  // end-point tangents plus curvature sup [f'']
  ConcaveShift = 3,        // f plus a concave quadratic bump
};

std::string_view to_string(OverestimatorKind kind) noexcept;
/// Accepts "pwa" / "pwq" / "concave" and "1" / "2" / "3".
std::optional<OverestimatorKind> parse_overestimator(std::string_view name) noexcept;

/// Raised when an overestimator is built outside the sign conditions that make it valid.
class HypothesisViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar C^2 function given by its value and first derivative.
struct UnivariateObjective {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Adapter over a facet problem. The problem must outlive the returned object.
UnivariateObjective objective_of(const FacetProblem& p);

/// Outcome of bounding the local maximum on one time interval.
struct BoundCertificate {
  double t_dagger = 0.0;  // maximizer of g
  double g_value = 0.0;   // upper bound on max f over the interval
  double f_value = 0.0;   // f(t_dagger), a lower bound
  bool convex_op_used = false;
};

struct ConcaveMaximum {
  double t = 0.0;
  double value = 0.0;        // best evaluated value (a lower bound on the maximum)
  double upper_bound = 0.0;  // value plus the floating-point safety margin
};

/// Golden-section maximization of a concave function on tint, stopped when the
/// bracket is no wider than tol_t. The best evaluated point (end points
/// included) is returned. upper_bound pads value by curvature * tol_t^2 / 8
/// when a curvature bound is supplied, plus 1e-12 max(1, |value|).
ConcaveMaximum concave_max(const std::function<double(double)>& g, const Interval& tint, double tol_t,
                           std::optional<double> curvature_bound = std::nullopt);

/// Golden-section stopping width used by the solver on [t]: max(1e-12 dt, 4 eps max|t|).
double concave_tolerance(const Interval& tint, double dt) noexcept;

/// Data defining g on [t_lo, t_hi]; unused fields stay zero.
struct OverestimatorParams {
  OverestimatorKind kind = OverestimatorKind::PiecewiseAffine;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double df_lo = 0.0;
  double df_hi = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double curvature = 0.0;
  double t_c = 0.0;
};

/// g on one time interval, evaluable anywhere on it.
class Overestimator {
 public:
  static Overestimator piecewise_affine(const UnivariateObjective& f, const Interval& tint,
                                        const Interval& fprime);
  static Overestimator piecewise_quadratic(const UnivariateObjective& f, const Interval& tint,
                                           const Interval& fsecond);
  static Overestimator concave_shift(const UnivariateObjective& f, const Interval& tint,
                                     const Interval& fsecond);

  OverestimatorKind kind() const noexcept { return kind_; }
  const Interval& domain() const noexcept { return tint_; }
  /// Switch point t_c between the two pieces (types 1 and 2); NaN for type 3.
  double switch_point() const noexcept { return t_c_; }

  double operator()(double t) const;
  OverestimatorParams parameters() const noexcept;

  /// t_dagger = argmax g. Types 1 and 2 are closed form; type 3 calls
  /// concave_max with the given stopping width.
  BoundCertificate maximize(double tol_t) const;

 private:
  Overestimator() = default;

  OverestimatorKind kind_ = OverestimatorKind::PiecewiseAffine;
  UnivariateObjective f_;
  Interval tint_;
  double f_lo_ = 0.0;      // f(t_lo)
  double f_hi_ = 0.0;      // f(t_hi)
  double df_lo_ = 0.0;     // f'(t_lo), type 2
  double df_hi_ = 0.0;     // f'(t_hi), type 2
  double slope_lo_ = 0.0;  // inf [f'], type 1
  double slope_hi_ = 0.0;  // sup [f'], type 1
  double curvature_ = 0.0; // sup [f''], types 2 and 3
  double curvature_width_ = 0.0;  // w([f'']), type 3 margin
  double t_c_ = 0.0;

  double left_piece(double t) const;
  double right_piece(double t) const;
};

BoundCertificate bound_type1(const UnivariateObjective& f, const Interval& tint, const Interval& fprime);
BoundCertificate bound_type2(const UnivariateObjective& f, const Interval& tint, const Interval& fsecond);
BoundCertificate bound_type3(const UnivariateObjective& f, const Interval& tint, const Interval& fsecond);

BoundCertificate bound_type1(const FacetProblem& p, const Interval& tint, const Interval& fprime);
BoundCertificate bound_type2(const FacetProblem& p, const Interval& tint, const Interval& fsecond);
BoundCertificate bound_type3(const FacetProblem& p, const Interval& tint, const Interval& fsecond);

}  // namespace intersample
