#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "fracou/constants.hpp"
#include "fracou/fbm.hpp"
#include "fracou/fou.hpp"

namespace fracou::estimators {

/// Least-squares drift estimate from grid observations x_0..x_n:
///   -sum x_{i-1}(x_i - x_{i-1}) / (delta * sum x_{i-1}^2).
/// Throws DegeneratePathError when the denominator vanishes.
double discrete_lse(std::span<const double> values, double delta);
double discrete_lse(const fbm::Path& path, double delta);

/// Fine-grid forward-sum approximation of the continuous-time estimator
/// int X dX / int X^2 ds. Same formula as discrete_lse; only the intended
/// reading differs (delta is a fine simulation step rather than the design
/// step).
double continuous_lse_proxy(const fbm::Path& path, double delta);

struct EstimateRecord {
  std::size_t k = 0;
  double horizon = 0.0;           // T_k = k * delta
  double theta_hat = 0.0;         // estimate from the first k increments
  double numerator = 0.0;         // G_bar_k
  double denominator = 0.0;       // R_bar_k
  double normalized_error = 0.0;  // G_bar_k / R_bar_k
  bool valid = false;             // false when sum x_{i-1}^2 == 0 (k = 1 always)
};

/// Geometric ladder k_{j+1} = max(k_j + 1, floor(ratio * k_j)) from 1 up to n
/// (n always included).
std::vector<std::size_t> geometric_checkpoints(std::size_t n, double ratio);
std::vector<std::size_t> dense_checkpoints(std::size_t n);

/// Caches sigma_{T} per distinct horizon so quadrature mode is paid once per T.
class SigmaTable {
 public:
  SigmaTable(const fou::ModelParams& params, constants::SigmaMode mode,
             constants::QuadratureConfig quad = {});

  /// Thread-safe; quadrature results are computed once per horizon.
  double sigma(double horizon);
  /// E(F_T^2) (or its limit in asymptotic mode).
  double second_moment(double horizon);
  double lambda() const noexcept { return lambda_; }
  constants::SigmaMode mode() const noexcept { return mode_; }

 private:
  fou::ModelParams params_;
  constants::SigmaMode mode_;
  constants::QuadratureConfig quad_;
  double lambda_;
  double asymptotic_;
  std::mutex mutex_;
  std::map<double, double> cache_;
};

/// For each checkpoint k (strictly increasing, <= design.n), computes theta_hat
/// from the first k observations and
///   G_bar_k = sum_{i<=k} x_{i-1} U_i / sqrt(T_k E F_{T_k}^2),
///   U_i     = x_i - x_{i-1} + theta x_{i-1} delta,
///   R_bar_k = sum_{i<=k} x_{i-1}^2 / (k lambda),
/// with normalized_error = G_bar_k / R_bar_k = sqrt(T_k)/sigma_{T_k} (theta - theta_hat_k).
/// Sums are accumulated incrementally over one pass of the path.
std::vector<EstimateRecord> estimate_series(const fbm::Path& path, const fou::SamplingDesign& design,
                                            const fou::ModelParams& params, SigmaTable& sigma,
                                            std::span<const std::size_t> checkpoints);

std::vector<EstimateRecord> estimate_series(const fbm::Path& path, const fou::SamplingDesign& design,
                                            const fou::ModelParams& params, constants::SigmaMode mode,
                                            std::span<const std::size_t> checkpoints);

/// sqrt(T)/sigma_T * (theta - theta_hat), evaluated directly.
double direct_normalized_error(double theta, double theta_hat, double horizon, double sigma_t);

}  // namespace fracou::estimators
