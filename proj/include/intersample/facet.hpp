#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "intersample/interval.hpp"
#include "intersample/interval_matrix.hpp"
#include "intersample/matexp.hpp"

namespace intersample {

/// One univariate instance
///   f(t) = h^T (exp(A t) x0 + int_0^t exp(A tau) dtau B u0),  t in [0, dt],
/// i.e. a single constraint row h (scaled to h^T x <= 1) along the sampled
/// trajectory from x0 under the held input u0.
class FacetProblem {
 public:
  FacetProblem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd x0, Eigen::VectorXd u0,
               Eigen::VectorXd h, double dt);

  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::MatrixXd& b() const noexcept { return b_; }
  const Eigen::VectorXd& x0() const noexcept { return x0_; }
  const Eigen::VectorXd& u0() const noexcept { return u0_; }
  const Eigen::VectorXd& h() const noexcept { return h_; }
  double dt() const noexcept { return dt_; }
  Eigen::Index state_dim() const noexcept { return a_.rows(); }

  /// v = A x0 + B u0 (rounded to nearest).
  const Eigen::VectorXd& v() const noexcept { return v_; }
  /// Enclosures of v and of the row h^T A, used by the derivative inclusions.
  const IntervalMatrix& v_enclosure() const noexcept { return v_enclosure_; }
  const std::vector<Interval>& ht_a_enclosure() const noexcept { return ht_a_enclosure_; }

  /// f(0) = h^T x0.
  double initial_value() const noexcept { return h_.dot(x0_); }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  Eigen::VectorXd x0_;
  Eigen::VectorXd u0_;
  Eigen::VectorXd h_;
  double dt_;
  Eigen::VectorXd v_;
  IntervalMatrix v_enclosure_;
  std::vector<Interval> ht_a_enclosure_;
};

/// A point and the objective value there.
struct PointMaximum {
  double t = 0.0;
  double value = 0.0;
};

double eval_f(const FacetProblem& p, double t);
/// f'(t) = h^T exp(A t) v
double eval_f_prime(const FacetProblem& p, double t);
/// f''(t) = h^T A exp(A t) v
double eval_f_second(const FacetProblem& p, double t);

/// State phi(t, x0, u0) = exp(A t) x0 + int_0^t exp(A tau) dtau B u0.
Eigen::VectorXd eval_state(const FacetProblem& p, double t);

struct DerivativeBounds {
  Interval first;
  Interval second;
};

/// Enclosures of f' and f'' over every t in tint: [D] = exp(A [t]) enclosed by
/// interval_exp, [d] = [D] v, then ([f'], [f'']) = (h^T [d], h^T A [d]).
DerivativeBounds derivative_inclusions(const FacetProblem& p, const Interval& tint, ExpParams params);

/// ||A [0, dt]||_inf, the norm the interval exponential sees on the root node.
double root_argument_norm(const FacetProblem& p);

struct AnalyticCase {
  enum class Kind { None, ConstantF, EigenvectorH, NilpotentA };
  Kind kind = Kind::None;
  double lambda = 0.0;   // EigenvectorH: h^T A = lambda h^T
  unsigned degree = 0;   // NilpotentA: smallest r with A^r = 0

  friend bool operator==(const AnalyticCase&, const AnalyticCase&) = default;
};

std::string_view to_string(AnalyticCase::Kind kind) noexcept;

/// Classifies the special cases with a closed-form maximum. Precedence is
/// ConstantF > EigenvectorH > NilpotentA. Nilpotency needs exact zeros in A^r.
AnalyticCase detect_analytic_case(const FacetProblem& p, double tol = 1e-10);

/// f is monotone when h is a left eigenvector of A, so the maximum sits at an end point.
PointMaximum solve_eigenvector_case(const FacetProblem& p, double lambda);

/// Coefficients c_0..c_r of f as a polynomial in t when A^r = 0.
/// Throws std::invalid_argument if A^r is not exactly zero.
std::vector<double> nilpotent_polynomial(const FacetProblem& p, unsigned r);

double eval_polynomial(const std::vector<double>& coefficients, double t) noexcept;

}  // namespace intersample
