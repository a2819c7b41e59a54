#pragma once

#include <cstddef>
#include <string_view>

#include "fracou/fbm.hpp"

namespace fracou::constants {

/// Ergodic limit of (1/t) int_0^t X_s^2 ds: theta^{-2H} H Gamma(2H).
double lambda_const(double theta, fbm::Hurst hurst);

/// Limit of E(F_t^2):
///   theta^{1-4H} H^2 (4H-1) [Gamma(2H)^2 + Gamma(2H) Gamma(3-4H) Gamma(4H-1) / Gamma(2-2H)].
/// Defined for H in [1/2, 3/4); H = 1/2 gives the Brownian value 1/(2 theta).
double big_a_const(double theta, fbm::Hurst hurst);

/// Parameters of the second-chaos kernel e^{-theta|u-v|} / (2 sqrt(t)) on [0, t]^2.
struct KernelSpec {
  KernelSpec(double theta, fbm::Hurst hurst, double horizon);

  double theta;
  fbm::Hurst hurst;  // in (1/2, 3/4)
  double horizon;
};

struct QuadratureConfig {
  double rel_tol = 1e-3;
  std::size_t max_intervals = 400;  // per integration level
};

struct Ef2Result {
  double value;
  double error;  // estimated absolute error
};

/// E(F_t^2) = H^2 (2H-1)^2 / (2t) * int_{[0,t]^4} e^{-theta|u-v|} e^{-theta|x-y|}
///            |u-x|^{2H-2} |v-y|^{2H-2} du dv dx dy.
///
/// With p = u - x, q = v - y, a = u - v the exponential pair and the
/// window length integrate out in closed form (see kernel_slice), leaving a
/// 2-D integral in (p, q) whose |p|^{2H-2}|q|^{2H-2} singularities are
/// absorbed by r = |p|^{2H-1}, s = |q|^{2H-1}. Throws QuadratureError with the
/// best estimate when the tolerance is not met within budget.
Ef2Result ef2(const KernelSpec& spec, const QuadratureConfig& config = {});

/// G(p, q) = int_R e^{-theta|a|} e^{-theta|a-p+q|} L_t(a, p, q) da where L_t is
/// the length of {u : u, u-p, u-a, u-a-q all in [0, t]}. Closed form.
double kernel_slice(double p, double q, double theta, double t);

enum class SigmaMode { asymptotic, quadrature };

std::string_view to_string(SigmaMode mode);
SigmaMode parse_sigma_mode(std::string_view text);

/// Normalizing constant of sqrt(t)(theta - theta_hat): sqrt(E F_t^2) / lambda,
/// with E F_t^2 replaced by its limit A in asymptotic mode.
double sigma(const KernelSpec& spec, SigmaMode mode, const QuadratureConfig& config = {});

}  // namespace fracou::constants
