#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "intersample/facet.hpp"
#include "support.hpp"

using namespace intersample;
using testsupport::Mp;
using testsupport::Rng;

namespace {

FacetProblem double_integrator() {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 0, 0;
  Eigen::MatrixXd b(2, 1);
  b << 0, 1;
  return FacetProblem(a, b, Eigen::Vector2d(25, 0.5), Eigen::VectorXd::Constant(1, -1.0), Eigen::Vector2d(0.04, 0), 1.0);
}

FacetProblem random_problem(Rng& rng, Eigen::Index n, bool stable) {
  const Eigen::MatrixXd a = stable ? rng.stable_matrix(n, -3.0, 3.0) : rng.matrix(n, n, -3.0, 3.0);
  const auto m = static_cast<Eigen::Index>(rng.integer(1, 2));
  return FacetProblem(a, rng.matrix(n, m, -2.0, 2.0), rng.vector(n, -1.0, 1.0), rng.vector(m, -1.0, 1.0),
                      rng.vector(n, -1.0, 1.0), rng.uniform(0.1, 1.0));
}

double rel_err(double got, const Mp& want) {
  return static_cast<double>(abs(Mp(got) - want) / std::max(Mp(1), abs(want)));
}

}  // namespace

TEST_CASE("problem validation") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(2, 1);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  CHECK_NOTHROW(FacetProblem(a, b, x, u, x, 1.0));
  CHECK_THROWS_AS(FacetProblem(Eigen::MatrixXd::Zero(2, 3), b, x, u, x, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(FacetProblem(a, Eigen::MatrixXd::Ones(3, 1), x, u, x, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(FacetProblem(a, b, Eigen::VectorXd::Zero(3), u, x, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(FacetProblem(a, b, x, Eigen::VectorXd::Zero(2), x, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(FacetProblem(a, b, x, u, Eigen::VectorXd::Zero(3), 1.0), DimensionMismatch);
  CHECK_THROWS_AS(FacetProblem(a, b, x, u, x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FacetProblem(a, b, x, u, x, std::nan("")), std::invalid_argument);
}

TEST_CASE("double integrator values and derivatives") {
  const FacetProblem p = double_integrator();
  CHECK(p.v() == Eigen::Vector2d(0.5, -1.0));
  CHECK(eval_f(p, 0.0) == 1.0);
  CHECK(eval_f(p, 0.5) == doctest::Approx(1.005).epsilon(1e-15));
  CHECK(eval_f(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_f_prime(p, 0.0) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(std::fabs(eval_f_prime(p, 0.5)) <= 1e-17);
  for (double t : {0.0, 0.3, 0.5, 1.0}) CHECK(eval_f_second(p, t) == doctest::Approx(-0.04).epsilon(1e-15));
  CHECK_THROWS_AS(eval_f(p, -1e-9), std::out_of_range);
  CHECK_THROWS_AS(eval_f_prime(p, 1.0 + 1e-9), std::out_of_range);
  CHECK_THROWS_AS(eval_f_second(p, 2.0), std::out_of_range);
  CHECK_THROWS_AS(eval_state(p, -0.5), std::out_of_range);
}

TEST_CASE("double integrator inclusions over the root interval") {
  const FacetProblem p = double_integrator();
  const DerivativeBounds d = derivative_inclusions(p, Interval(0.0, 1.0), ExpParams{10, 10});
  CHECK(d.first.contains(Interval(-0.02, 0.02)));
  CHECK(width(d.first) - 0.04 <= 1e-8);
  CHECK(d.second.contains(-0.04));
  CHECK(width(d.second) <= 1e-8);
  CHECK(d.second.hi() < 0.0);
  CHECK_THROWS_AS(derivative_inclusions(p, Interval(0.5, 1.5), ExpParams{}), std::out_of_range);
  CHECK_THROWS_AS(derivative_inclusions(p, Interval::unbounded(), ExpParams{}), std::out_of_range);
}

TEST_CASE("property: point evaluations match a 50-digit oracle") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const FacetProblem p = random_problem(rng, rng.integer(2, 4), trial % 2 == 0);
    const double t = rng.uniform(0.0, p.dt());
    CHECK(rel_err(eval_f(p, t), testsupport::mp_f(p, t)) <= 1e-13);
    CHECK(rel_err(eval_f_prime(p, t), testsupport::mp_f_prime(p, t)) <= 1e-13);
    CHECK(rel_err(eval_f_second(p, t), testsupport::mp_f_second(p, t)) <= 1e-12);
    const Eigen::VectorXd x = eval_state(p, t);
    const std::vector<Mp> want = testsupport::mp_state(p, t);
    for (Eigen::Index i = 0; i < x.size(); ++i) CHECK(rel_err(x(i), want[static_cast<std::size_t>(i)]) <= 1e-13);
  }
}

TEST_CASE("property: degenerate time intervals contain the point derivatives") {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const FacetProblem p = random_problem(rng, rng.integer(2, 4), trial % 3 != 0);
    const double t = rng.uniform(0.0, p.dt());
    const DerivativeBounds d = derivative_inclusions(p, Interval(t), ExpParams{10, 10});
    const Mp f1 = testsupport::mp_f_prime(p, t);
    const Mp f2 = testsupport::mp_f_second(p, t);
    CHECK((Mp(d.first.lo()) <= f1 && f1 <= Mp(d.first.hi())));
    CHECK((Mp(d.second.lo()) <= f2 && f2 <= Mp(d.second.hi())));
  }
}

TEST_CASE("property: inclusions contain a dense grid of derivatives") {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const FacetProblem p(rng.stable_matrix(2, -3.0, 3.0), rng.matrix(2, 1, -2.0, 2.0), rng.vector(2, -1.0, 1.0),
                         rng.vector(1, -1.0, 1.0), rng.vector(2, -1.0, 1.0), 0.5);
    const DerivativeBounds d = derivative_inclusions(p, Interval(0.0, 0.5), ExpParams{10, 10});
    int violations = 0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.5 * i / 1000.0;
      const Mp f1 = testsupport::mp_f_prime(p, t);
      const Mp f2 = testsupport::mp_f_second(p, t);
      if (!(Mp(d.first.lo()) <= f1 && f1 <= Mp(d.first.hi()))) ++violations;
      if (!(Mp(d.second.lo()) <= f2 && f2 <= Mp(d.second.hi()))) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("property: inclusions are nested") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const FacetProblem p = random_problem(rng, rng.integer(2, 4), false);
    const double a = rng.uniform(0.0, p.dt());
    const double b = rng.uniform(0.0, p.dt());
    const Interval outer(std::min(a, b), std::max(a, b));
    const double c = rng.point_in(outer);
    const double e = rng.point_in(outer);
    const Interval inner(std::min(c, e), std::max(c, e));
    const DerivativeBounds din = derivative_inclusions(p, inner, ExpParams{10, 10});
    const DerivativeBounds dout = derivative_inclusions(p, outer, ExpParams{10, 10});
    CHECK(dout.first.contains(din.first));
    CHECK(dout.second.contains(din.second));
  }
}

TEST_CASE("property: finite differences agree with the derivatives") {
  Rng rng(5);
  const double delta = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const FacetProblem p = random_problem(rng, rng.integer(2, 4), true);
    const double t = rng.uniform(delta, p.dt() - delta);
    const double fd1 = (eval_f(p, t + delta) - eval_f(p, t - delta)) / (2 * delta);
    const double fd2 = (eval_f_prime(p, t + delta) - eval_f_prime(p, t - delta)) / (2 * delta);
    // Truncation is |f'''| delta^2 / 6; rounding is eps |f| / delta.
    const double a_norm = p.a().cwiseAbs().rowwise().sum().maxCoeff();
    const double scale = std::max(1.0, std::fabs(eval_f(p, t))) * std::exp(a_norm * p.dt()) *
                         (1.0 + p.v().cwiseAbs().sum()) * (1.0 + a_norm * a_norm * a_norm);
    CHECK(std::fabs(eval_f_prime(p, t) - fd1) <= scale * (delta * delta + 1e-16 / delta));
    CHECK(std::fabs(eval_f_second(p, t) - fd2) <= scale * (a_norm * delta * delta + 1e-16 / delta));
  }
}

TEST_CASE("analytic case detection") {
  const FacetProblem ex1 = double_integrator();
  const AnalyticCase c1 = detect_analytic_case(ex1);
  CHECK(c1.kind == AnalyticCase::Kind::NilpotentA);
  CHECK(c1.degree == 2);

  const FacetProblem zero_h(ex1.a(), ex1.b(), ex1.x0(), ex1.u0(), Eigen::Vector2d::Zero(), 1.0);
  CHECK(detect_analytic_case(zero_h).kind == AnalyticCase::Kind::ConstantF);

  // A = 0 and u0 = 0 give v = 0.
  const FacetProblem zero_v(Eigen::MatrixXd::Zero(2, 2), ex1.b(), ex1.x0(), Eigen::VectorXd::Zero(1),
                            Eigen::Vector2d(1, 0), 1.0);
  CHECK(detect_analytic_case(zero_v).kind == AnalyticCase::Kind::ConstantF);

  const FacetProblem ident(Eigen::MatrixXd::Identity(2, 2), ex1.b(), ex1.x0(), ex1.u0(), Eigen::Vector2d(1, 0), 1.0);
  const AnalyticCase ce = detect_analytic_case(ident);
  CHECK(ce.kind == AnalyticCase::Kind::EigenvectorH);
  CHECK(ce.lambda == 1.0);

  // h^T A = 0 for h = e2 and the nilpotent A: eigenvector wins over nilpotent.
  const FacetProblem both(ex1.a(), ex1.b(), ex1.x0(), ex1.u0(), Eigen::Vector2d(0, 1), 1.0);
  CHECK(detect_analytic_case(both).kind == AnalyticCase::Kind::EigenvectorH);

  Eigen::MatrixXd rot(2, 2);
  rot << -1, 7, -7, -1;
  const FacetProblem none(rot, Eigen::MatrixXd(Eigen::Vector2d(-1, 0)), Eigen::Vector2d(0.6, 0.7),
                          Eigen::VectorXd::Constant(1, 1.0), Eigen::Vector2d(-2, 2), 1.0);
  CHECK(detect_analytic_case(none).kind == AnalyticCase::Kind::None);
  CHECK(to_string(AnalyticCase::Kind::NilpotentA) == "nilpotent");
}

TEST_CASE("eigenvector closed form") {
  Eigen::MatrixXd a(2, 2);
  a << -1, 0, 0, -2;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 1);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  const FacetProblem decaying(a, b, Eigen::Vector2d(1, 0), u, Eigen::Vector2d(1, 0), 1.0);
  const PointMaximum m1 = solve_eigenvector_case(decaying, -1.0);
  CHECK(m1.value == 1.0);
  CHECK(m1.t == 0.0);

  a(0, 0) = 1;
  const FacetProblem growing(a, b, Eigen::Vector2d(1, 0), u, Eigen::Vector2d(1, 0), 1.0);
  const PointMaximum m2 = solve_eigenvector_case(growing, 1.0);
  CHECK(m2.value == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(m2.t == 1.0);

  const FacetProblem constant(a, b, Eigen::Vector2d(0, 0), u, Eigen::Vector2d(1, 0), 1.0);
  CHECK(solve_eigenvector_case(constant, 3.0).value == 0.0);
}

TEST_CASE("nilpotent polynomial") {
  const FacetProblem ex1 = double_integrator();
  const std::vector<double> c = nilpotent_polynomial(ex1, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(c[2] == doctest::Approx(-0.02).epsilon(1e-15));
  CHECK_THROWS_AS(nilpotent_polynomial(ex1, 1), std::invalid_argument);

  const FacetProblem integrator(Eigen::MatrixXd::Zero(2, 2), ex1.b(), ex1.x0(), ex1.u0(), Eigen::Vector2d(0.3, 2.0), 1.0);
  const std::vector<double> lin = nilpotent_polynomial(integrator, 1);
  REQUIRE(lin.size() == 2);
  CHECK(lin[0] == doctest::Approx(0.3 * 25 + 2.0 * 0.5));
  CHECK(lin[1] == doctest::Approx(-2.0));
}

TEST_CASE("property: nilpotent systems follow their polynomial") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 3;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) a(i, j) = rng.uniform(-3.0, 3.0);
    // Similarity by a permutation keeps exact zeros in every power.
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + n, rng.engine());
    a = perm * a * perm.transpose();
    const FacetProblem p(a, rng.matrix(n, 1, -2.0, 2.0), rng.vector(n, -1.0, 1.0), rng.vector(1, -1.0, 1.0),
                         rng.vector(n, -1.0, 1.0), rng.uniform(0.1, 1.0));
    const AnalyticCase ac = detect_analytic_case(p);
    if (ac.kind != AnalyticCase::Kind::NilpotentA) continue;
    const std::vector<double> poly = nilpotent_polynomial(p, ac.degree);
    for (int i = 0; i < 100; ++i) {
      const double t = i == 99 ? p.dt() : p.dt() * i / 99.0;
      const double want = eval_polynomial(poly, t);
      CHECK(std::fabs(eval_f(p, t) - want) <= 1e-10 * std::max(1.0, std::fabs(want)));
    }
  }
}
