#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>

namespace intersample {

/// Thrown when interval arithmetic is attempted on the unbounded sentinel.
class SentinelArithmetic : public std::logic_error {
 public:
  SentinelArithmetic() : std::logic_error("arithmetic on the unbounded sentinel interval") {}
};

/// Process-wide switch for outward rounding. On by default.
void set_outward_rounding(bool enabled) noexcept;
bool outward_rounding() noexcept;

/// RAII guard that sets the rounding mode for a scope and restores the old one.
class OutwardRoundingScope {
 public:
  explicit OutwardRoundingScope(bool enabled) noexcept : previous_(outward_rounding()) {
    set_outward_rounding(enabled);
  }
  ~OutwardRoundingScope() { set_outward_rounding(previous_); }
  OutwardRoundingScope(const OutwardRoundingScope&) = delete;
  OutwardRoundingScope& operator=(const OutwardRoundingScope&) = delete;

 private:
  bool previous_;
};

// Directed-rounded elementary operations. When outward rounding is enabled the
// result is the floating-point neighbour on the requested side whenever the
// rounded-to-nearest result lies on the wrong side of the exact value.
namespace rounding {
double add_down(double a, double b) noexcept;
double add_up(double a, double b) noexcept;
double sub_down(double a, double b) noexcept;
double sub_up(double a, double b) noexcept;
double mul_down(double a, double b) noexcept;
double mul_up(double a, double b) noexcept;
double div_down(double a, double b) noexcept;
double div_up(double a, double b) noexcept;
}  // namespace rounding

/// Closed real interval [lo, hi] with finite endpoints, or the unbounded
/// sentinel [-inf, inf] used to mark unprocessed branch-and-bound nodes.
class Interval {
 public:
  constexpr Interval() noexcept = default;
  constexpr Interval(double value) noexcept : lo_(value), hi_(value) {}  // NOLINT: degenerate interval
  Interval(double lo, double hi);

  static constexpr Interval unbounded() noexcept {
    Interval r;
    r.lo_ = -std::numeric_limits<double>::infinity();
    r.hi_ = std::numeric_limits<double>::infinity();
    return r;
  }

  /// Smallest interval guaranteed to contain the exact quotient num/den
  /// (a degenerate interval when rounding is off or the division is exact).
  static Interval quotient(double num, double den);

  constexpr double lo() const noexcept { return lo_; }
  constexpr double hi() const noexcept { return hi_; }
  constexpr bool is_unbounded() const noexcept {
    return lo_ == -std::numeric_limits<double>::infinity() &&
           hi_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_degenerate() const noexcept { return lo_ == hi_; }
  double mid() const noexcept;

  constexpr bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  constexpr bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) noexcept = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval mul(const Interval& a, const Interval& b);
Interval neg(const Interval& a);
/// a^kappa by the three-case power rule; tighter than repeated mul for even kappa.
Interval pow(const Interval& a, unsigned kappa);
/// Convex hull of two intervals.
Interval hull(const Interval& a, const Interval& b);

/// max(|lo|, |hi|)
double magnitude(const Interval& a) noexcept;
/// hi - lo, rounded up; +inf for the sentinel.
double width(const Interval& a) noexcept;

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }

std::ostream& operator<<(std::ostream& os, const Interval& a);
std::string to_string(const Interval& a);

}  // namespace intersample
