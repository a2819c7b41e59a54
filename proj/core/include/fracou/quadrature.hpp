#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fracou::quadrature {

/// Integrand value together with an error bound on that value, for
/// integrands that are themselves computed numerically.
struct Sample {
  double value;
  double error = 0.0;
};

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-6;
  std::size_t max_intervals = 1000;
};

struct Result {
  double value = 0.0;
  /// Discretization error of this level plus the integrated error of the
  /// integrand samples.
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

using Integrand = std::function<Sample(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b], initially
/// split at `breakpoints` that fall strictly inside. The interval with the
/// largest error estimate is bisected until the tolerance is met or
/// `max_intervals` is reached (then `converged` is false).
Result integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 const Options& options);

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& options);

}  // namespace fracou::quadrature
