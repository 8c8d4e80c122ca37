#include "intersample/matexp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace intersample {

namespace {

constexpr unsigned kPointOrder = 20;
constexpr unsigned kMaxPointScaling = 40;

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) throw DimensionMismatch(std::string(what) + ": matrix must be square");
}

std::string scaling_message(unsigned k, unsigned l, unsigned minimal_l, double norm) {
  std::ostringstream os;
  os.precision(17);
  os << "2^l (k+2) must exceed ||[C]||_inf = " << norm << " (k = " << k << ", l = " << l
     << "); smallest admissible l is " << minimal_l;
  return os.str();
}

// Smallest l with ||M|| 2^-l <= 1/2.
unsigned point_scaling(long double norm) {
  unsigned l = 0;
  while (norm > 0.5L && l < 2000) {
    norm *= 0.5L;
    ++l;
  }
  return l;
}

}  // namespace

bool ExpParams::admits(double norm) const noexcept {
  // 2^l (k + 2) is exact in double for any l used in practice.
  return std::ldexp(static_cast<double>(k) + 2.0, static_cast<int>(l)) > norm;
}

ScalingTooSmall::ScalingTooSmall(unsigned k, unsigned l, unsigned minimal_l, double norm)
    : std::domain_error(scaling_message(k, l, minimal_l, norm)),
      k_(k),
      l_(l),
      minimal_l_(minimal_l),
      norm_(norm) {}

unsigned minimal_scaling(double norm, unsigned k) {
  unsigned l = 0;
  while (!ExpParams{k, l}.admits(norm) && l < 2000) ++l;
  return l;
}

IntervalMatrix interval_exp(const IntervalMatrix& c, ExpParams params) {
  require_square(static_cast<Eigen::Index>(c.rows()), static_cast<Eigen::Index>(c.cols()),
                 "interval_exp");
  const double norm = inf_norm(c);
  if (!params.admits(norm)) {
    throw ScalingTooSmall(params.k, params.l, minimal_scaling(norm, params.k), norm);
  }
  const std::size_t n = c.rows();
  const IntervalMatrix eye = IntervalMatrix::identity(n);
  const IntervalMatrix scaled = mat_scale(c, Interval(std::ldexp(1.0, -static_cast<int>(params.l))));

  // I + C*(I + C*/2 (... (I + C*/k)...))
  IntervalMatrix series = eye;
  for (unsigned j = params.k; j >= 1; --j) {
    series = eye + mat_scale(scaled, Interval::quotient(1.0, static_cast<double>(j))) * series;
  }

  const double rho = inf_norm(scaled);
  double tail = 1.0;
  for (unsigned i = 1; i <= params.k + 1; ++i) {
    tail = rounding::mul_up(tail, rho);
    tail = rounding::div_up(tail, static_cast<double>(i));
  }
  const double denom =
      rounding::sub_down(1.0, rounding::div_up(rho, static_cast<double>(params.k) + 2.0));
  tail = rounding::div_up(tail, denom);
  // ||R||_inf <= tail bounds every entry of the remainder, not just the diagonal.
  const Interval remainder(-tail, tail);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) series(i, j) = series(i, j) + remainder;

  for (unsigned s = 0; s < params.l; ++s) series = series * series;
  return series;
}

namespace detail {

MatrixXld point_exp_ld(const MatrixXld& m) {
  require_square(m.rows(), m.cols(), "point_exp");
  if (!m.allFinite()) throw std::invalid_argument("point_exp: matrix has non-finite entries");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const unsigned l = point_scaling(m.cwiseAbs().rowwise().sum().maxCoeff());
  const MatrixXld scaled = m * std::ldexp(1.0L, -static_cast<int>(l));
  const MatrixXld eye = MatrixXld::Identity(n, n);
  MatrixXld series = eye;
  for (unsigned j = kPointOrder; j >= 1; --j) {
    series = eye + (scaled / static_cast<long double>(j)) * series;
  }
  for (unsigned s = 0; s < l; ++s) series = series * series;
  return series;
}

}  // namespace detail

Eigen::MatrixXd point_exp(const Eigen::MatrixXd& m) {
  return detail::point_exp_ld(m.cast<long double>()).cast<double>();
}

IntervalMatrix point_exp_enclosure(const Eigen::MatrixXd& m) {
  require_square(m.rows(), m.cols(), "point_exp_enclosure");
  const IntervalMatrix degenerate(m);
  const double norm = inf_norm(degenerate);
  unsigned l = point_scaling(static_cast<long double>(norm));
  l = std::max(l, minimal_scaling(norm, kPointOrder));
  if (l > kMaxPointScaling) {
    throw ScalingTooSmall(kPointOrder, kMaxPointScaling, l, norm);
  }
  return interval_exp(degenerate, ExpParams{kPointOrder, l});
}

Eigen::VectorXd augmented_phi(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double t) {
  require_square(a.rows(), a.cols(), "augmented_phi");
  if (v.size() != a.rows()) throw DimensionMismatch("augmented_phi: vector length differs from A");
  if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("augmented_phi: t must be finite and >= 0");
  const Eigen::Index n = a.rows();
  detail::MatrixXld aug = detail::MatrixXld::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = a.cast<long double>() * static_cast<long double>(t);
  aug.topRightCorner(n, 1) = v.cast<long double>() * static_cast<long double>(t);
  return detail::point_exp_ld(aug).topRightCorner(n, 1).cast<double>();
}

}  // namespace intersample
