#include "intersample/interval_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace intersample {

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

IntervalMatrix::IntervalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntervalMatrix::IntervalMatrix(const Eigen::MatrixXd& point)
    : rows_(static_cast<std::size_t>(point.rows())),
      cols_(static_cast<std::size_t>(point.cols())),
      data_(rows_ * cols_) {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double x = point(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      (*this)(i, j) = Interval(x, x);
    }
  }
}

IntervalMatrix::IntervalMatrix(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper)
    : rows_(static_cast<std::size_t>(lower.rows())),
      cols_(static_cast<std::size_t>(lower.cols())),
      data_(rows_ * cols_) {
  if (lower.rows() != upper.rows() || lower.cols() != upper.cols()) {
    throw DimensionMismatch("interval matrix bounds have different shapes");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      (*this)(i, j) = Interval(lower(r, c), upper(r, c));
    }
  }
}

IntervalMatrix IntervalMatrix::identity(std::size_t n) {
  IntervalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Interval(1.0);
  return m;
}

Eigen::MatrixXd IntervalMatrix::lower() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).lo();
  return m;
}

Eigen::MatrixXd IntervalMatrix::upper() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).hi();
  return m;
}

Eigen::MatrixXd IntervalMatrix::mid() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).mid();
  return m;
}

Eigen::MatrixXd IntervalMatrix::magnitude() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = intersample::magnitude((*this)(i, j));
  return m;
}

double IntervalMatrix::max_width() const {
  double w = 0.0;
  for (const auto& e : data_) w = std::max(w, width(e));
  return w;
}

bool IntervalMatrix::contains(const Eigen::MatrixXd& point) const {
  if (static_cast<std::size_t>(point.rows()) != rows_ ||
      static_cast<std::size_t>(point.cols()) != cols_) {
    return false;
  }
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).contains(point(i, j))) return false;
  return true;
}

bool IntervalMatrix::contains(const IntervalMatrix& other) const {
  if (other.rows_ != rows_ || other.cols_ != cols_) return false;
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!data_[k].contains(other.data_[k])) return false;
  return true;
}

IntervalMatrix mat_add(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("mat_add: " + shape(a.rows(), a.cols()) + " + " +
                            shape(b.rows(), b.cols()));
  }
  IntervalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

IntervalMatrix mat_mul(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: " + shape(a.rows(), a.cols()) + " * " +
                            shape(b.rows(), b.cols()));
  }
  IntervalMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Interval acc(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

IntervalMatrix mat_scale(const IntervalMatrix& a, const Interval& s) {
  IntervalMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

double inf_norm(const IntervalMatrix& a) {
  double norm = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row = rounding::add_up(row, magnitude(a(i, j)));
    norm = std::max(norm, row);
  }
  return norm;
}

Interval dot(const Eigen::VectorXd& weights, const IntervalMatrix& v) {
  if (v.cols() != 1 || static_cast<std::size_t>(weights.size()) != v.rows()) {
    throw DimensionMismatch("dot: weight vector and interval vector differ in length");
  }
  Interval acc(0.0);
  for (std::size_t i = 0; i < v.rows(); ++i) acc = acc + Interval(weights(static_cast<Eigen::Index>(i))) * v(i, 0);
  return acc;
}

}  // namespace intersample
