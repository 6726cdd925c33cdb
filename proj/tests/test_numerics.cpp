#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "starcycle/errors.hpp"
#include "starcycle/numerics.hpp"

using namespace starcycle;

namespace {

OdeProblem scalar_problem(double (*rhs)(double, double), double y0, double t0,
                          double t1) {
  OdeProblem p;
  p.dimension = 1;
  p.y0 = {y0};
  p.t0 = t0;
  p.t1 = t1;
  p.rhs = [rhs](double t, const std::vector<double>& y,
                std::vector<double>& dy) { dy[0] = rhs(t, y[0]); };
  return p;
}

}  // namespace

TEST_CASE("exponential growth integrates to e") {
  OdeProblem p = scalar_problem([](double, double y) { return y; }, 1.0, 0.0,
                                1.0);
  DenseSolution sol = ode_solve(p);
  CHECK(std::abs(sol.y_end()[0] - std::exp(1.0)) < 1e-9);
  // dense output along the way
  for (double t : {0.1, 0.25, 0.5, 0.77, 0.99})
    CHECK(std::abs(sol.eval1(t) - std::exp(t)) < 1e-8);
}

TEST_CASE("cubic-growth profile matches its closed form") {
  // f' = u f^3 has f(u) = (f0^-2 - u^2)^{-1/2}
  OdeProblem p = scalar_problem([](double u, double f) { return u * f * f * f; },
                                0.5, 0.0, 1.0);
  DenseSolution sol = ode_solve(p);
  CHECK(std::abs(sol.y_end()[0] - 0.5 / std::sqrt(0.75)) < 1e-8);
}

TEST_CASE("integration runs backwards too") {
  OdeProblem p = scalar_problem([](double, double y) { return y; },
                                std::exp(1.0), 1.0, 0.0);
  DenseSolution sol = ode_solve(p);
  CHECK(std::abs(sol.y_end()[0] - 1.0) < 1e-9);
}

TEST_CASE("guards localize the crossing tightly") {
  OdeProblem p = scalar_problem([](double, double) { return 1.0; }, 0.0, 0.0,
                                2.0);
  p.guards.push_back(
      [](double, const std::vector<double>& y) { return y[0] - 0.5; });
  DenseSolution sol = ode_solve(p);
  REQUIRE(sol.guard_hit.has_value());
  CHECK(sol.guard_hit->index == 0);
  CHECK(std::abs(sol.guard_hit->t - 0.5) < 1e-12);
  CHECK(std::abs(sol.t_end() - 0.5) < 1e-12);
}

TEST_CASE("denominator guard stays quiet on the second radial example") {
  // f' = -u f (u f + 1) / (u^3 f + u^2 - 2), f(0) = rho = 0.3; the
  // denominator never vanishes along the orbit, so the guard must not fire.
  auto rhs = [](double u, double f) {
    return -u * f * (u * f + 1.0) / (u * u * u * f + u * u - 2.0);
  };
  for (double dir : {1.0, -1.0}) {
    OdeProblem p;
    p.dimension = 1;
    p.y0 = {0.3};
    p.t0 = 0.0;
    p.t1 = dir * (1.0 - 1e-6);
    p.rhs = [&](double u, const std::vector<double>& y,
                std::vector<double>& dy) { dy[0] = rhs(u, y[0]); };
    p.guards.push_back([](double u, const std::vector<double>& y) {
      return u * u * u * y[0] + u * u - 2.0;
    });
    DenseSolution sol = ode_solve(p);
    CHECK_FALSE(sol.guard_hit.has_value());
    CHECK(std::abs(sol.t_end() - p.t1) == 0.0);
  }
}

TEST_CASE("norm bound turns runaway growth into a reported blow-up") {
  OdeProblem p = scalar_problem([](double, double y) { return y * y; }, 1.0,
                                0.0, 2.0);
  p.norm_bound = 1e8;
  CHECK_THROWS_AS((void)ode_solve(p), BlowUp);
}

TEST_CASE("halving tolerances moves terminal values less than 10x tolerance") {
  auto run = [](double (*rhs)(double, double), double y0, double t1,
                double rtol) {
    OdeProblem p = scalar_problem(rhs, y0, 0.0, t1);
    p.rtol = rtol;
    p.atol = rtol * 1e-2;
    return ode_solve(p).y_end()[0];
  };
  struct Case {
    double (*rhs)(double, double);
    double y0, t1;
  };
  const Case cases[] = {
      {[](double, double y) { return y; }, 1.0, 1.0},
      {[](double u, double f) { return u * f * f * f; }, 0.5, 1.0},
      {[](double t, double y) { return std::cos(t) * y; }, 1.0, 3.0},
  };
  for (const auto& c : cases) {
    for (double rtol : {1e-8, 1e-10}) {
      double coarse = run(c.rhs, c.y0, c.t1, rtol);
      double fine = run(c.rhs, c.y0, c.t1, rtol / 2.0);
      CHECK(std::abs(coarse - fine) <=
            10.0 * rtol * (1.0 + std::abs(coarse)));
    }
  }
}

TEST_CASE("quadrature handles the basic shapes") {
  CHECK(std::abs(quad([](double x) { return x * x; }, 0.0, 1.0, 1e-12) -
                 1.0 / 3.0) < 1e-12);
  double arcsine = quad([](double u) { return 1.0 / std::sqrt(1.0 - u * u); },
                        -1.0, 1.0, 1e-10, EndpointMode::sqrt_sub);
  CHECK(std::abs(arcsine - M_PI) < 1e-10);
  CHECK_THROWS_AS((void)quad([](double u) { return 1.0 / (1.0 - u * u); },
                             -1.0, 1.0, 1e-10),
                  NonIntegrableEndpoint);
}

TEST_CASE("quadrature is exact on random polynomials") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> ends(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    int deg = trial % 21;
    std::vector<double> c(deg + 1);
    for (auto& v : c) v = coef(rng);
    double a = ends(rng), b = ends(rng);
    if (std::abs(b - a) < 1e-3) b = a + 1.0;
    auto poly = [&](double x) {
      double acc = 0.0;
      for (int k = deg; k >= 0; --k) acc = acc * x + c[k];
      return acc;
    };
    auto anti = [&](double x) {
      double acc = 0.0;
      for (int k = deg; k >= 0; --k) acc = acc * x + c[k] / (k + 1);
      return acc * x;
    };
    double exact = anti(b) - anti(a);
    double got = quad(poly, a, b, 1e-10);
    CHECK(std::abs(got - exact) < 1e-9 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("bisection brackets roots and rejects bad brackets") {
  CHECK(std::abs(bisect([](double x) { return x - 0.3; }, 0.0, 1.0, 1e-12) -
                 0.3) < 1e-12);
  CHECK(std::abs(bisect([](double x) { return std::cos(x); }, 0.0, 2.0,
                        1e-12) -
                 M_PI / 2.0) < 1e-11);
  CHECK_THROWS_AS(
      (void)bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-12),
      NoSignChange);
}

TEST_CASE("repeated quadrature and integration are bit-identical") {
  auto f = [](double x) { return std::exp(-x * x) * std::sin(3.0 * x + 0.2); };
  double q1 = quad(f, -2.0, 2.0, 1e-12);
  double q2 = quad(f, -2.0, 2.0, 1e-12);
  CHECK(q1 == q2);
  OdeProblem p = scalar_problem(
      [](double t, double y) { return std::sin(t) - 0.3 * y; }, 0.7, 0.0, 5.0);
  double a = ode_solve(p).y_end()[0];
  double b = ode_solve(p).y_end()[0];
  CHECK(a == b);
}
