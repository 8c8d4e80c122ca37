#include "intersample/facet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace intersample {

namespace {

using detail::MatrixXld;
using detail::VectorXld;

void require_time(const FacetProblem& p, double t) {
  if (!(t >= 0.0 && t <= p.dt())) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside [0, " + std::to_string(p.dt()) + "]");
  }
}

MatrixXld exp_at(const FacetProblem& p, double t) {
  return detail::point_exp_ld(p.a().cast<long double>() * static_cast<long double>(t));
}

// Sum_j terms_j with an interval accumulator; each term is [x_j] * [y_j].
Interval interval_dot(const std::vector<Interval>& x, const IntervalMatrix& y) {
  Interval acc(0.0);
  for (std::size_t j = 0; j < x.size(); ++j) acc = acc + x[j] * y(j, 0);
  return acc;
}

}  // namespace

FacetProblem::FacetProblem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd x0,
                           Eigen::VectorXd u0, Eigen::VectorXd h, double dt)
    : a_(std::move(a)),
      b_(std::move(b)),
      x0_(std::move(x0)),
      u0_(std::move(u0)),
      h_(std::move(h)),
      dt_(dt) {
  const Eigen::Index n = a_.rows();
  if (n == 0 || a_.cols() != n) throw DimensionMismatch("A must be a nonempty square matrix");
  if (b_.rows() != n) throw DimensionMismatch("B must have as many rows as A");
  if (x0_.size() != n) throw DimensionMismatch("x0 length differs from the state dimension");
  if (h_.size() != n) throw DimensionMismatch("h length differs from the state dimension");
  if (u0_.size() != b_.cols()) throw DimensionMismatch("u0 length differs from the input dimension");
  if (!(std::isfinite(dt_) && dt_ > 0.0)) throw std::invalid_argument("sampling time must be finite and > 0");
  if (!a_.allFinite() || !b_.allFinite() || !x0_.allFinite() || !u0_.allFinite() || !h_.allFinite()) {
    throw std::invalid_argument("facet problem data must be finite");
  }

  v_ = a_ * x0_ + b_ * u0_;

  v_enclosure_ = IntervalMatrix(static_cast<std::size_t>(n), 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Interval acc(0.0);
    for (Eigen::Index j = 0; j < n; ++j) acc = acc + Interval(a_(i, j)) * Interval(x0_(j));
    for (Eigen::Index j = 0; j < b_.cols(); ++j) acc = acc + Interval(b_(i, j)) * Interval(u0_(j));
    v_enclosure_(static_cast<std::size_t>(i), 0) = acc;
  }

  ht_a_enclosure_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Interval acc(0.0);
    for (Eigen::Index i = 0; i < n; ++i) acc = acc + Interval(h_(i)) * Interval(a_(i, j));
    ht_a_enclosure_[static_cast<std::size_t>(j)] = acc;
  }
}

Eigen::VectorXd eval_state(const FacetProblem& p, double t) {
  require_time(p, t);
  const Eigen::Index n = p.state_dim();
  MatrixXld aug = MatrixXld::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = p.a().cast<long double>() * static_cast<long double>(t);
  aug.topRightCorner(n, 1) = p.v().cast<long double>() * static_cast<long double>(t);
  const VectorXld phi = detail::point_exp_ld(aug).topRightCorner(n, 1);
  return (phi + p.x0().cast<long double>()).cast<double>();
}

double eval_f(const FacetProblem& p, double t) {
  require_time(p, t);
  if (t == 0.0) return p.initial_value();
  const Eigen::Index n = p.state_dim();
  MatrixXld aug = MatrixXld::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = p.a().cast<long double>() * static_cast<long double>(t);
  aug.topRightCorner(n, 1) = p.v().cast<long double>() * static_cast<long double>(t);
  const VectorXld phi = detail::point_exp_ld(aug).topRightCorner(n, 1);
  return static_cast<double>(p.h().cast<long double>().dot(phi + p.x0().cast<long double>()));
}

double eval_f_prime(const FacetProblem& p, double t) {
  require_time(p, t);
  const VectorXld d = exp_at(p, t) * p.v().cast<long double>();
  return static_cast<double>(p.h().cast<long double>().dot(d));
}

double eval_f_second(const FacetProblem& p, double t) {
  require_time(p, t);
  const VectorXld d = exp_at(p, t) * p.v().cast<long double>();
  const VectorXld weights = p.a().cast<long double>().transpose() * p.h().cast<long double>();
  return static_cast<double>(weights.dot(d));
}

double root_argument_norm(const FacetProblem& p) {
  IntervalMatrix c(IntervalMatrix(p.a()));
  return inf_norm(mat_scale(c, Interval(0.0, p.dt())));
}

DerivativeBounds derivative_inclusions(const FacetProblem& p, const Interval& tint, ExpParams params) {
  if (tint.is_unbounded() || tint.lo() < 0.0 || tint.hi() > p.dt()) {
    throw std::out_of_range("time interval " + to_string(tint) + " not inside [0, dt]");
  }
  const IntervalMatrix c = mat_scale(IntervalMatrix(p.a()), tint);
  const IntervalMatrix d = interval_exp(c, params) * p.v_enclosure();
  DerivativeBounds out;
  out.first = dot(p.h(), d);
  out.second = interval_dot(p.ht_a_enclosure(), d);
  return out;
}

std::string_view to_string(AnalyticCase::Kind kind) noexcept {
  switch (kind) {
    case AnalyticCase::Kind::None: return "none";
    case AnalyticCase::Kind::ConstantF: return "constant";
    case AnalyticCase::Kind::EigenvectorH: return "eigenvector";
    case AnalyticCase::Kind::NilpotentA: return "nilpotent";
  }
  return "none";
}

AnalyticCase detect_analytic_case(const FacetProblem& p, double tol) {
  AnalyticCase out;
  const Eigen::VectorXd& h = p.h();
  if (h.cwiseAbs().maxCoeff() == 0.0 || p.v().cwiseAbs().maxCoeff() == 0.0) {
    out.kind = AnalyticCase::Kind::ConstantF;
    return out;
  }

  const Eigen::MatrixXd& a = p.a();
  const double lambda = h.dot(a * h) / h.dot(h);
  const double residual = (a.transpose() * h - lambda * h).cwiseAbs().maxCoeff();
  const double a_norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (residual <= tol * a_norm * h.cwiseAbs().maxCoeff()) {
    out.kind = AnalyticCase::Kind::EigenvectorH;
    out.lambda = lambda;
    return out;
  }

  Eigen::MatrixXd power = a;
  for (Eigen::Index r = 1; r <= a.rows(); ++r) {
    if ((power.array() == 0.0).all()) {
      out.kind = AnalyticCase::Kind::NilpotentA;
      out.degree = static_cast<unsigned>(r);
      return out;
    }
    power = power * a;
  }
  return out;
}

PointMaximum solve_eigenvector_case(const FacetProblem& p, double /*lambda*/) {
  const double start = p.initial_value();
  const double end = eval_f(p, p.dt());
  if (end > start) return {p.dt(), end};
  return {0.0, start};
}

std::vector<double> nilpotent_polynomial(const FacetProblem& p, unsigned r) {
  const Eigen::MatrixXd& a = p.a();
  const Eigen::Index n = a.rows();
  if (r == 0) throw std::invalid_argument("nilpotency degree must be >= 1");
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (unsigned i = 0; i < r; ++i) power = power * a;
  if (!(power.array() == 0.0).all()) {
    throw std::invalid_argument("A^" + std::to_string(r) + " is not exactly zero");
  }

  const Eigen::VectorXd bu = p.b() * p.u0();
  std::vector<double> coeffs(r + 1, 0.0);
  coeffs[0] = p.h().dot(p.x0());
  Eigen::MatrixXd a_prev = Eigen::MatrixXd::Identity(n, n);  // A^(k-1)
  double factorial = 1.0;
  for (unsigned k = 1; k <= r; ++k) {
    factorial *= static_cast<double>(k);
    const Eigen::MatrixXd a_k = a_prev * a;
    const Eigen::VectorXd term = k < r ? Eigen::VectorXd(a_k * p.x0() + a_prev * bu) : Eigen::VectorXd(a_prev * bu);
    coeffs[k] = p.h().dot(term) / factorial;
    a_prev = a_k;
  }
  return coeffs;
}

double eval_polynomial(const std::vector<double>& coefficients, double t) noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace intersample
