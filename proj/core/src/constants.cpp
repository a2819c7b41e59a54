#include "fracou/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "fracou/error.hpp"
#include "fracou/numerics.hpp"
#include "fracou/quadrature.hpp"

namespace fracou::constants {
namespace {

using numerics::gamma_fn;

// int_0^1 e^{z u} du and int_0^1 u e^{z u} du for z <= 0.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

double psi1(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z * (1.0 / 3.0 + z * (1.0 / 8.0 + z / 30.0));
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

}  // namespace

double lambda_const(double theta, fbm::Hurst hurst) {
  if (!(theta > 0.0)) throw ConfigError("lambda_const: theta must be positive");
  const double h = hurst.value();
  return std::pow(theta, -2.0 * h) * h * gamma_fn(2.0 * h);
}

double big_a_const(double theta, fbm::Hurst hurst) {
  if (!(theta > 0.0)) throw ConfigError("big_a_const: theta must be positive");
  const double h = hurst.value();
  if (h < 0.5) throw ConfigError("big_a_const: H must be >= 1/2");
  if (h >= 0.75) throw ConfigError("big_a_const: pole of Gamma(3-4H) at H = 3/4; H must be < 3/4");
  const double g2h = gamma_fn(2.0 * h);
  const double bracket =
      g2h * g2h + g2h * gamma_fn(3.0 - 4.0 * h) * gamma_fn(4.0 * h - 1.0) / gamma_fn(2.0 - 2.0 * h);
  return std::pow(theta, 1.0 - 4.0 * h) * h * h * (4.0 * h - 1.0) * bracket;
}

KernelSpec::KernelSpec(double theta_, fbm::Hurst hurst_, double horizon_)
    : theta(theta_), hurst(hurst_), horizon(horizon_) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("kernel: theta must be positive");
  if (!(hurst.value() > 0.5 && hurst.value() < 0.75)) {
    throw ConfigError("kernel: H must lie in (1/2, 3/4)");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("kernel: horizon must be positive");
}

double kernel_slice(double p, double q, double theta, double t) {
  const double hp = std::max(0.0, p);
  const double lp = std::min(0.0, p);
  const double hq = std::max(0.0, q);
  const double lq = std::min(0.0, q);
  const double s = p - q;
  auto span = [&](double a) { return std::max(hp, a + hq) - std::min(lp, a + lq); };
  auto exponent = [&](double a) { return -theta * (std::abs(a) + std::abs(a - s)); };

  const double a1 = hp - hq;
  const double a2 = lp - lq;
  if (span(0.5 * (a1 + a2)) >= t) return 0.0;
  // span is convex with slope -1 left of min(a1, a2) and +1 right of max(a1, a2).
  const double a_lo = hp - lq - t;
  const double a_hi = t + lp - hq;

  std::array<double, 6> cuts{a_lo, a1, a2, 0.0, s, a_hi};
  for (double& c : cuts) c = std::clamp(c, a_lo, a_hi);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i];
    const double x1 = cuts[i + 1];
    const double h = x1 - x0;
    if (!(h > 0.0)) continue;
    const double l0 = std::max(0.0, t - span(x0));
    const double l1 = std::max(0.0, t - span(x1));
    const double e0 = exponent(x0);
    const double e1 = exponent(x1);
    // Expand from the endpoint with the larger exponent so the exponential decays.
    const bool from_left = e0 >= e1;
    const double e_org = from_left ? e0 : e1;
    const double l_org = from_left ? l0 : l1;
    const double slope = ((from_left ? l1 : l0) - l_org) / h;
    const double z = -std::abs(e1 - e0);
    total += std::exp(e_org) * (l_org * h * phi1(z) + slope * h * h * psi1(z));
  }
  return total;
}

Ef2Result ef2(const KernelSpec& spec, const QuadratureConfig& config) {
  const double h = spec.hurst.value();
  const double t = spec.horizon;
  const double theta = spec.theta;
  const double kappa = 1.0 / (2.0 * h - 1.0);
  const double r_max = std::pow(t, 2.0 * h - 1.0);

  quadrature::Options inner_opts;
  inner_opts.rel_tol = config.rel_tol / 10.0;
  inner_opts.max_intervals = config.max_intervals;
  quadrature::Options outer_opts;
  outer_opts.rel_tol = config.rel_tol / 2.0;
  outer_opts.max_intervals = config.max_intervals;

  bool inner_failed = false;
  // By the reflection u -> t - u, G(-p, -q) = G(p, q), so p > 0 suffices.
  const quadrature::Integrand outer = [&](double r) {
    const double p = std::pow(r, kappa);
    quadrature::Sample acc{0.0, 0.0};
    for (const double sign : {1.0, -1.0}) {
      const quadrature::Integrand inner = [&](double s) {
        return quadrature::Sample{kernel_slice(p, sign * std::pow(s, kappa), theta, t), 0.0};
      };
      // q = p sits at s = r and carries the cusp of e^{-theta|p-q|}.
      const std::array<double, 1> cusp{r};
      const auto res = quadrature::integrate(
          inner, 0.0, r_max, sign > 0.0 ? std::span<const double>(cusp) : std::span<const double>(),
          inner_opts);
      if (!res.converged) inner_failed = true;
      acc.value += res.value;
      acc.error += res.error;
    }
    return acc;
  };
  const auto res = quadrature::integrate(outer, 0.0, r_max, {}, outer_opts);

  const double scale = h * h / t;
  Ef2Result out{scale * res.value, scale * res.error};
  const bool within = out.error <= config.rel_tol * std::abs(out.value);
  if (!within || inner_failed || !(out.value > 0.0)) {
    std::ostringstream msg;
    msg << "ef2: quadrature did not reach relative tolerance " << config.rel_tol
        << " within " << config.max_intervals << " intervals (estimate " << out.value
        << ", error bound " << out.error << ")";
    throw QuadratureError(msg.str(), out.value, out.error);
  }
  return out;
}

std::string_view to_string(SigmaMode mode) {
  return mode == SigmaMode::asymptotic ? "asymptotic" : "quadrature";
}

SigmaMode parse_sigma_mode(std::string_view text) {
  if (text == "asymptotic") return SigmaMode::asymptotic;
  if (text == "quadrature") return SigmaMode::quadrature;
  throw ConfigError("sigma mode must be 'asymptotic' or 'quadrature', got '" + std::string(text) + "'");
}

double sigma(const KernelSpec& spec, SigmaMode mode, const QuadratureConfig& config) {
  const double lambda = lambda_const(spec.theta, spec.hurst);
  const double second_moment =
      mode == SigmaMode::asymptotic ? big_a_const(spec.theta, spec.hurst) : ef2(spec, config).value;
  return std::sqrt(second_moment) / lambda;
}

}  // namespace fracou::constants
