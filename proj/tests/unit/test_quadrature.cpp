#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fracou/quadrature.hpp"

using namespace fracou::quadrature;

TEST(Quadrature, PolynomialExact) {
  // G7/K15 integrates degree-22 polynomials exactly on one interval
  const auto r = integrate([](double x) { return std::pow(x, 20) - 3 * x * x; }, -1.0, 2.0, Options{});
  EXPECT_NEAR(r.value, (std::pow(2.0, 21) + 1.0) / 21.0 - 9.0, 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, Oscillatory) {
  const auto r = integrate([](double x) { return std::cos(30 * x); }, 0.0, 2.0, Options{0.0, 1e-10, 500});
  EXPECT_NEAR(r.value, std::sin(60.0) / 30.0, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, IntegrableEndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, Options{0.0, 1e-8, 1000});
  EXPECT_NEAR(r.value, 2.0, 1e-7);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, BreakpointsHelpKinks) {
  const std::vector<double> bp{0.3};
  const Integrand f = [](double x) { return Sample{std::abs(x - 0.3)}; };
  const auto r = integrate(f, 0.0, 1.0, bp, Options{0.0, 1e-12, 10});
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-13);
  EXPECT_EQ(r.intervals, 2u);
}

TEST(Quadrature, ReportsBudgetExhaustion) {
  const auto r = integrate([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0, Options{0.0, 1e-12, 5});
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.intervals, 5u);
  EXPECT_GT(r.error, 0.0);
}

TEST(Quadrature, ErrorBoundIsHonest) {
  const auto f = [](double x) { return std::exp(-x) * std::pow(x, -0.3); };
  for (double tol : {1e-3, 1e-5, 1e-7}) {
    const auto coarse = integrate(f, 0.0, 5.0, Options{0.0, tol, 2000});
    const auto fine = integrate(f, 0.0, 5.0, Options{0.0, tol / 2, 2000});
    EXPECT_LE(std::abs(fine.value - coarse.value), coarse.error) << tol;
  }
}

TEST(Quadrature, InnerErrorIsPropagated) {
  const Integrand f = [](double x) { return Sample{x, 1e-3}; };
  const auto r = integrate(f, 0.0, 2.0, {}, Options{0.0, 1e-6, 100});
  EXPECT_NEAR(r.value, 2.0, 1e-14);
  EXPECT_NEAR(r.error, 2e-3, 1e-6);
  EXPECT_FALSE(r.converged);
}

TEST(Quadrature, EmptyAndReversedIntervals) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0, Options{}).value, 0.0);
  EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0, Options{}).value, -0.5, 1e-15);
}
