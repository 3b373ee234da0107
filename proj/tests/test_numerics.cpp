#include <cmath>
#include <limits>

#include "doctest.h"
#include "ordloc/family.hpp"
#include "ordloc/numerics.hpp"
#include "ordloc/rng.hpp"

using namespace ordloc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE_BEGIN("numerics");

TEST_CASE("standard integrals over infinite ranges") {
  CHECK(std::fabs(integrate([](double x) { return std_normal_pdf(x); }, -kInf,
                            kInf) -
                  1.0) <= 1e-10);
  CHECK(std::fabs(integrate([](double x) { return std::exp(-x); }, 0.0, kInf) -
                  1.0) <= 1e-10);
  CHECK(std::fabs(
            integrate([](double x) { return x * std::exp(-x); }, 0.0, kInf) -
            1.0) <= 1e-10);
}

TEST_CASE("finite range and split points") {
  CHECK(integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0) ==
        doctest::Approx(8.0).epsilon(1e-12));
  // |x| has a kink at 0; a split there keeps the panels smooth
  QuadSpec spec;
  spec.split_points = {0.0};
  CHECK(std::fabs(integrate([](double x) { return std::fabs(x); }, -1.0, 2.0,
                            spec) -
                  2.5) <= 1e-10);
  // reversed endpoints flip the sign
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) ==
        doctest::Approx(-0.5));
}

TEST_CASE("quadrature is deterministic") {
  auto fn = [](double x) { return std::exp(-0.5 * x * x) * std::cos(3.0 * x); };
  const double a = integrate(fn, -kInf, kInf);
  const double b = integrate(fn, -kInf, kInf);
  CHECK(a == b);  // bit identical
}

TEST_CASE("non-integrable integrand reports failure with best estimate") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0),
                  QuadratureError);
  try {
    integrate([](double x) { return 1.0 / x; }, 0.0, 1.0);
  } catch (const QuadratureError& e) {
    CHECK(e.best_estimate > 0.0);
    CHECK(e.error_bound > 0.0);
  }
}

TEST_CASE("root finding on simple equations") {
  CHECK(std::fabs(solve_root([](double x) { return x - 3.0; }, 0.0, 10.0) -
                  3.0) <= 1e-10);
  CHECK(std::fabs(solve_root([](double x) { return std_normal_cdf(x) - 0.5; },
                             -5.0, 5.0)) <= 1e-10);
  CHECK(std::fabs(solve_root([](double x) { return std::exp(x) - 2.0; }, -5.0,
                             5.0) -
                  std::log(2.0)) <= 1e-10);
}

TEST_CASE("bracket expansion reaches far roots") {
  const double r = solve_root([](double x) { return x - 100.0; }, 0.0, 1.0);
  CHECK(std::fabs(r - 100.0) <= 1e-8);
  const double r2 = solve_root([](double x) { return x + 57.0; }, 0.0, 1.0);
  CHECK(std::fabs(r2 + 57.0) <= 1e-8);
}

TEST_CASE("missing sign change is detected") {
  CHECK_THROWS_AS(solve_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  RootError);
}

TEST_CASE("roots of random monotone functions are bracketed and unique") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const double root = 20.0 * (rng.uniform() - 0.5);
    const double slope = 0.1 + 3.0 * rng.uniform();
    const double cubic = 2.0 * rng.uniform();
    auto fn = [=](double x) {
      const double d = x - root;
      return slope * d + cubic * d * d * d;
    };
    const double found = solve_root(fn, -1.0, 1.0);
    CHECK(std::fabs(found - root) <= 1e-9 * (1.0 + std::fabs(root)));
  }
}

TEST_SUITE_END();
