#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "specsense/errors.hpp"
#include "specsense/quadrature.hpp"

using namespace specsense;

TEST(Quadrature, ExactForPolynomials) {
  const auto r = quad::integrate([](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, OscillatoryAndPeaked) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-13);
  const auto r = quad::integrate([](double x) { return 1e-4 / (x * x + 1e-8); }, -1.0, 1.0);
  EXPECT_NEAR(r.value, 2.0 * std::atan(1e4), 1e-9);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = quad::integrate([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, SemiInfinite) {
  const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const auto g = quad::integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 1.0);
  EXPECT_NEAR(g.value, 0.5 * std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Quadrature, Breakpoints) {
  const std::vector<double> pts{0.0, 0.3, 1.0};
  const auto r = quad::integrate([](double x) { return x < 0.3 ? 1.0 : 2.0; }, pts);
  EXPECT_NEAR(r.value, 0.3 + 1.4, 1e-14);
}

TEST(Quadrature, ThrowsWhenBudgetExhausted) {
  quad::Options opts;
  opts.max_intervals = 2;
  opts.rel_tol = 1e-15;
  const std::vector<double> pts{0.0, 1.0};
  EXPECT_THROW(quad::integrate_or_throw([](double x) { return std::sin(1.0 / (x + 1e-3)); }, pts, opts, "test"),
               ConvergenceError);
}
