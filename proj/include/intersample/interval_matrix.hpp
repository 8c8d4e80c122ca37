#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "intersample/interval.hpp"

namespace intersample {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of intervals. Vectors are n x 1 matrices.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  /// rows x cols matrix of degenerate zeros.
  IntervalMatrix(std::size_t rows, std::size_t cols);
  /// Degenerate (point) matrix.
  explicit IntervalMatrix(const Eigen::MatrixXd& point);
  /// Entrywise [lower, upper].
  IntervalMatrix(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper);

  static IntervalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const Interval& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Interval& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Eigen::MatrixXd lower() const;
  Eigen::MatrixXd upper() const;
  Eigen::MatrixXd mid() const;
  /// Entrywise magnitude |[C]|.
  Eigen::MatrixXd magnitude() const;
  /// Largest entry width.
  double max_width() const;

  bool contains(const Eigen::MatrixXd& point) const;
  bool contains(const IntervalMatrix& other) const;

  friend bool operator==(const IntervalMatrix&, const IntervalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Interval> data_;
};

IntervalMatrix mat_add(const IntervalMatrix& a, const IntervalMatrix& b);
/// Naive triple-loop product over interval add/mul.
IntervalMatrix mat_mul(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix mat_scale(const IntervalMatrix& a, const Interval& s);

/// Row-sum norm of the magnitude matrix, rounded up: max over C in [C] of ||C||_inf.
double inf_norm(const IntervalMatrix& a);

/// Sum_i weights_i * v_i for a point weight vector and an interval column vector.
Interval dot(const Eigen::VectorXd& weights, const IntervalMatrix& v);

inline IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b) { return mat_add(a, b); }
inline IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b) { return mat_mul(a, b); }
inline IntervalMatrix operator*(const Interval& s, const IntervalMatrix& a) { return mat_scale(a, s); }

}  // namespace intersample
