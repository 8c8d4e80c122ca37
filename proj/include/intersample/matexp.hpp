#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "intersample/interval_matrix.hpp"

namespace intersample {

/// Taylor truncation order k and scaling exponent l of the interval exponential.
struct ExpParams {
  unsigned k = 10;
  unsigned l = 10;

  /// 2^l (k + 2) > norm, the admissibility condition for an argument of that norm.
  bool admits(double norm) const noexcept;
};

/// The scaling condition 2^l (k + 2) > ||[C]||_inf does not hold.
class ScalingTooSmall : public std::domain_error {
 public:
  ScalingTooSmall(unsigned k, unsigned l, unsigned minimal_l, double norm);
  unsigned k() const noexcept { return k_; }
  unsigned l() const noexcept { return l_; }
  /// Smallest l that would satisfy the condition for the same k.
  unsigned minimal_l() const noexcept { return minimal_l_; }
  double norm() const noexcept { return norm_; }

 private:
  unsigned k_;
  unsigned l_;
  unsigned minimal_l_;
  double norm_;
};

/// Smallest l with 2^l (k + 2) > norm.
unsigned minimal_scaling(double norm, unsigned k);

/// Validated enclosure of {exp(C) : C in [C]}.
///
/// [C*] = 2^-l [C] is expanded as the Horner-nested Taylor polynomial of
/// order k plus the interval remainder
///   ||[C*]||^(k+1) / ((k+1)! (1 - ||[C*]||/(k+2))) [-I, I],
/// and the result is squared l times. Throws ScalingTooSmall when
/// 2^l (k + 2) <= ||[C]||_inf.
IntervalMatrix interval_exp(const IntervalMatrix& c, ExpParams params);

/// exp(M) to near machine precision (long double Taylor of order 20 with
/// scaling so that ||M|| 2^-l <= 1/2). Throws on non-square or non-finite input.
Eigen::MatrixXd point_exp(const Eigen::MatrixXd& m);

/// Accuracy certificate for point_exp: interval_exp of the degenerate matrix
/// with k = 20 and the same scaling, escalating l up to 40.
IntervalMatrix point_exp_enclosure(const Eigen::MatrixXd& m);

/// Integral_0^t exp(A tau) d tau * v, read off the exponential of the
/// augmented matrix [[A, v], [0, 0]] t. Valid for singular A.
Eigen::VectorXd augmented_phi(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t);

namespace detail {
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
MatrixXld point_exp_ld(const MatrixXld& m);
}  // namespace detail

}  // namespace intersample
