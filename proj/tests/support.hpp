#pragma once

// Shared generators and independent oracles for the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "intersample/facet.hpp"
#include "intersample/interval.hpp"
#include "intersample/interval_matrix.hpp"

namespace testsupport {

using Mp = boost::multiprecision::cpp_bin_float_50;
using MpMatrix = std::vector<std::vector<Mp>>;
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
  Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) { return matrix(n, 1, lo, hi); }

  /// An interval of random centre and width, occasionally degenerate or touching zero.
  intersample::Interval interval(double scale) {
    const int shape = integer(0, 5);
    const double a = uniform(-scale, scale);
    if (shape == 0) return intersample::Interval(a);
    if (shape == 1) return intersample::Interval(std::min(0.0, a), std::max(0.0, a));
    const double b = uniform(-scale, scale);
    return intersample::Interval(std::min(a, b), std::max(a, b));
  }

  /// Uniform point of x, with the end points drawn a quarter of the time.
  double point_in(const intersample::Interval& x) {
    const int pick = integer(0, 7);
    if (pick == 0) return x.lo();
    if (pick == 1) return x.hi();
    return std::clamp(uniform(x.lo(), x.hi()), x.lo(), x.hi());
  }

  Eigen::MatrixXd point_in(const intersample::IntervalMatrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = point_in(m(i, j));
    return out;
  }

  /// Square matrix whose eigenvalues all have negative real part.
  Eigen::MatrixXd stable_matrix(Eigen::Index n, double lo, double hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline MpMatrix mp_zero(std::size_t n) { return MpMatrix(n, std::vector<Mp>(n, Mp(0))); }

inline MpMatrix mp_identity(std::size_t n) {
  MpMatrix m = mp_zero(n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline MpMatrix mp_mul(const MpMatrix& a, const MpMatrix& b) {
  const std::size_t n = a.size();
  MpMatrix c = mp_zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline MpMatrix to_mp(const Eigen::MatrixXd& m) {
  MpMatrix out = mp_zero(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = Mp(m(i, j));
  return out;
}

/// exp(M) in 50-digit arithmetic: scale below 1/16, Taylor to 40 terms, square back.
inline MpMatrix mp_expm(MpMatrix m) {
  const std::size_t n = m.size();
  Mp norm = 0;
  for (const auto& row : m) {
    Mp s = 0;
    for (const Mp& x : row) s += abs(x);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  while (norm > Mp(1) / 16) {
    norm /= 2;
    ++squarings;
  }
  const Mp scale = ldexp(Mp(1), -squarings);
  for (auto& row : m)
    for (Mp& x : row) x *= scale;
  MpMatrix sum = mp_identity(n);
  MpMatrix term = mp_identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = mp_mul(term, m);
    for (auto& row : term)
      for (Mp& x : row) x /= k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) sum = mp_mul(sum, sum);
  return sum;
}

/// State of x' = A x + B u0 at time t from x0, in 50-digit arithmetic via the
/// exponential of [[A, B u0], [0, 0]] t applied to (x0, 1).
inline std::vector<Mp> mp_state(const intersample::FacetProblem& p, double t) {
  const std::size_t n = static_cast<std::size_t>(p.state_dim());
  MpMatrix z = mp_zero(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) z[i][j] = Mp(p.a()(i, j)) * Mp(t);
    Mp bu = 0;
    for (Eigen::Index c = 0; c < p.b().cols(); ++c) bu += Mp(p.b()(i, c)) * Mp(p.u0()(c));
    z[i][n] = bu * Mp(t);
  }
  const MpMatrix e = mp_expm(z);
  std::vector<Mp> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Mp acc = e[i][n];
    for (std::size_t j = 0; j < n; ++j) acc += e[i][j] * Mp(p.x0()(j));
    x[i] = acc;
  }
  return x;
}

inline Mp mp_f(const intersample::FacetProblem& p, double t) {
  const std::vector<Mp> x = mp_state(p, t);
  Mp acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += Mp(p.h()(i)) * x[i];
  return acc;
}

/// f'(t) = h^T x'(t) = h^T (A x(t) + B u0).
inline Mp mp_f_prime(const intersample::FacetProblem& p, double t) {
  const std::vector<Mp> x = mp_state(p, t);
  const std::size_t n = x.size();
  Mp acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Mp dx = 0;
    for (std::size_t j = 0; j < n; ++j) dx += Mp(p.a()(i, j)) * x[j];
    for (Eigen::Index c = 0; c < p.b().cols(); ++c) dx += Mp(p.b()(i, c)) * Mp(p.u0()(c));
    acc += Mp(p.h()(i)) * dx;
  }
  return acc;
}

/// f''(t) = h^T A x'(t).
inline Mp mp_f_second(const intersample::FacetProblem& p, double t) {
  const std::vector<Mp> x = mp_state(p, t);
  const std::size_t n = x.size();
  std::vector<Mp> dx(n, Mp(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dx[i] += Mp(p.a()(i, j)) * x[j];
    for (Eigen::Index c = 0; c < p.b().cols(); ++c) dx[i] += Mp(p.b()(i, c)) * Mp(p.u0()(c));
  }
  Mp acc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) acc += Mp(p.h()(i)) * Mp(p.a()(i, j)) * dx[j];
  return acc;
}

struct GridMax {
  double value = -INFINITY;
  double t = 0.0;
};

/// max of f over points + 1 uniform grid points of [0, dt]. Uses Eigen's
/// long double matrix exponential of the homogeneous system z' = [[A, B u0], [0, 0]] z,
/// restarted from an exact exponential every `block` steps.
inline GridMax grid_max(const intersample::FacetProblem& p, std::size_t points, std::size_t block = 1000) {
  const Eigen::Index n = p.state_dim();
  MatrixXld m = MatrixXld::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = p.a().cast<long double>();
  m.topRightCorner(n, 1) = (p.b() * p.u0()).cast<long double>();
  VectorXld z0(n + 1);
  z0.head(n) = p.x0().cast<long double>();
  z0(n) = 1.0L;
  VectorXld hz = VectorXld::Zero(n + 1);
  hz.head(n) = p.h().cast<long double>();

  const long double step = static_cast<long double>(p.dt()) / static_cast<long double>(points);
  const MatrixXld e_step = (m * step).exp();
  GridMax best;
  VectorXld z = z0;
  for (std::size_t i = 0; i <= points; ++i) {
    if (i % block == 0) {
      const MatrixXld e = (m * (step * static_cast<long double>(i))).exp();
      z = e * z0;
    } else {
      z = e_step * z;
    }
    const double value = static_cast<double>(hz.dot(z));
    if (value > best.value) {
      best.value = value;
      best.t = static_cast<double>(step * static_cast<long double>(i));
    }
  }
  return best;
}

inline Eigen::MatrixXd Rng::stable_matrix(Eigen::Index n, double lo, double hi) {
  for (;;) {
    Eigen::MatrixXd a = matrix(n, n, lo, hi);
    const Eigen::VectorXcd eig = a.eigenvalues();
    if ((eig.real().array() < 0.0).all()) return a;
  }
}

}  // namespace testsupport
