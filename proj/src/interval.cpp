#include "intersample/interval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>

namespace intersample {

namespace {

std::atomic<bool> g_outward_rounding{true};

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude an FMA residual may underflow, so its sign cannot be trusted.
constexpr double kTiny = 0x1p-960;

double next_up(double x) noexcept { return std::nextafter(x, kInf); }
double next_down(double x) noexcept { return std::nextafter(x, -kInf); }

// Exact rounding error of a + b (Knuth TwoSum): a + b == s + err.
double two_sum_err(double a, double b, double s) noexcept {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

void require_finite(const Interval& a) {
  if (a.is_unbounded()) throw SentinelArithmetic();
}

}  // namespace

void set_outward_rounding(bool enabled) noexcept { g_outward_rounding.store(enabled); }
bool outward_rounding() noexcept { return g_outward_rounding.load(std::memory_order_relaxed); }

namespace rounding {

double add_down(double a, double b) noexcept {
  const double s = a + b;
  if (!outward_rounding() || !std::isfinite(s)) return s;
  return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) noexcept {
  const double s = a + b;
  if (!outward_rounding() || !std::isfinite(s)) return s;
  return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) noexcept { return add_down(a, -b); }
double sub_up(double a, double b) noexcept { return add_up(a, -b); }

double mul_down(double a, double b) noexcept {
  const double p = a * b;
  if (!outward_rounding() || !std::isfinite(p) || a == 0.0 || b == 0.0) return p;
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) noexcept {
  const double p = a * b;
  if (!outward_rounding() || !std::isfinite(p) || a == 0.0 || b == 0.0) return p;
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

double div_down(double a, double b) noexcept {
  const double q = a / b;
  if (!outward_rounding() || !std::isfinite(q) || a == 0.0) return q;
  if (std::fabs(q) < kTiny) return next_down(q);
  // a == q*b + r exactly, so a/b - q has the sign of r/b.
  const double r = std::fma(-q, b, a);
  return (r != 0.0 && ((r < 0.0) != (b < 0.0))) ? next_down(q) : q;
}

double div_up(double a, double b) noexcept {
  const double q = a / b;
  if (!outward_rounding() || !std::isfinite(q) || a == 0.0) return q;
  if (std::fabs(q) < kTiny) return next_up(q);
  const double r = std::fma(-q, b, a);
  return (r != 0.0 && ((r < 0.0) == (b < 0.0))) ? next_up(q) : q;
}

}  // namespace rounding

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval endpoints must be finite");
  }
  if (lo > hi) {
    throw std::invalid_argument("interval lower endpoint exceeds upper endpoint");
  }
}

Interval Interval::quotient(double num, double den) {
  if (den == 0.0) throw std::invalid_argument("interval quotient by zero");
  return Interval(rounding::div_down(num, den), rounding::div_up(num, den));
}

double Interval::mid() const noexcept {
  if (is_unbounded()) return 0.0;
  return 0.5 * lo_ + 0.5 * hi_;
}

Interval add(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  return Interval(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

Interval sub(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  return Interval(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

Interval neg(const Interval& a) {
  require_finite(a);
  return Interval(-a.hi(), -a.lo());
}

Interval mul(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  using rounding::mul_down;
  using rounding::mul_up;
  const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()),
                              mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())});
  const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()),
                              mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())});
  return Interval(lo, hi);
}

namespace {

// |x|^kappa for x >= 0 with directed rounding.
double pow_nonneg(double x, unsigned kappa, bool up) {
  double r = 1.0;
  for (unsigned i = 0; i < kappa; ++i) r = up ? rounding::mul_up(r, x) : rounding::mul_down(r, x);
  return r;
}

// x^kappa rounded towards -inf (up == false) or +inf (up == true), any sign of x.
double pow_directed(double x, unsigned kappa, bool up) {
  if (x >= 0.0 || kappa % 2 == 0) return pow_nonneg(std::fabs(x), kappa, up);
  // odd power of a negative number: -(|x|^kappa), rounding direction flips
  return -pow_nonneg(-x, kappa, !up);
}

}  // namespace

Interval pow(const Interval& a, unsigned kappa) {
  require_finite(a);
  if (kappa == 0) return Interval(1.0);
  const bool even = kappa % 2 == 0;
  if (a.lo() > 0.0 || !even) {
    return Interval(pow_directed(a.lo(), kappa, false), pow_directed(a.hi(), kappa, true));
  }
  if (a.hi() < 0.0) {
    return Interval(pow_nonneg(-a.hi(), kappa, false), pow_nonneg(-a.lo(), kappa, true));
  }
  return Interval(0.0, pow_nonneg(magnitude(a), kappa, true));
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_unbounded() || b.is_unbounded()) return Interval::unbounded();
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

double magnitude(const Interval& a) noexcept {
  return std::max(std::fabs(a.lo()), std::fabs(a.hi()));
}

double width(const Interval& a) noexcept {
  if (a.is_unbounded()) return kInf;
  return rounding::sub_up(a.hi(), a.lo());
}

std::ostream& operator<<(std::ostream& os, const Interval& a) {
  return os << '[' << a.lo() << ", " << a.hi() << ']';
}

std::string to_string(const Interval& a) {
  std::ostringstream os;
  os.precision(17);
  os << a;
  return os.str();
}

}  // namespace intersample
