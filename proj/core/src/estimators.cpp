#include "fracou/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "fracou/error.hpp"

namespace fracou::estimators {

double discrete_lse(std::span<const double> values, double delta) {
  if (values.size() < 2) throw ConfigError("discrete_lse: need at least one increment");
  if (!(delta > 0.0)) throw ConfigError("discrete_lse: delta must be positive");
  double cross = 0.0;
  double energy = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    cross += values[i - 1] * (values[i] - values[i - 1]);
    energy += values[i - 1] * values[i - 1];
  }
  if (energy == 0.0) throw DegeneratePathError("discrete_lse: sum of squared observations is zero");
  return -cross / (delta * energy);
}

double discrete_lse(const fbm::Path& path, double delta) { return discrete_lse(path.values, delta); }

double continuous_lse_proxy(const fbm::Path& path, double delta) { return discrete_lse(path.values, delta); }

std::vector<std::size_t> geometric_checkpoints(std::size_t n, double ratio) {
  if (n < 1) throw ConfigError("checkpoints: n must be >= 1");
  if (!(ratio > 1.0)) throw ConfigError("checkpoints: geometric ratio must exceed 1");
  std::vector<std::size_t> ks;
  std::size_t k = 1;
  while (k < n) {
    ks.push_back(k);
    const auto next = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(k)));
    k = std::max(k + 1, next);
  }
  ks.push_back(n);
  return ks;
}

std::vector<std::size_t> dense_checkpoints(std::size_t n) {
  std::vector<std::size_t> ks(n);
  for (std::size_t i = 0; i < n; ++i) ks[i] = i + 1;
  return ks;
}

SigmaTable::SigmaTable(const fou::ModelParams& params, constants::SigmaMode mode,
                       constants::QuadratureConfig quad)
    : params_(params),
      mode_(mode),
      quad_(quad),
      lambda_(constants::lambda_const(params.theta, params.hurst)),
      asymptotic_(constants::big_a_const(params.theta, params.hurst)) {}

double SigmaTable::second_moment(double horizon) {
  if (mode_ == constants::SigmaMode::asymptotic) return asymptotic_;
  std::lock_guard lock(mutex_);
  if (const auto it = cache_.find(horizon); it != cache_.end()) return it->second;
  const double v = constants::ef2(constants::KernelSpec(params_.theta, params_.hurst, horizon), quad_).value;
  cache_.emplace(horizon, v);
  return v;
}

double SigmaTable::sigma(double horizon) { return std::sqrt(second_moment(horizon)) / lambda_; }

std::vector<EstimateRecord> estimate_series(const fbm::Path& path, const fou::SamplingDesign& design,
                                            const fou::ModelParams& params, SigmaTable& sigma,
                                            std::span<const std::size_t> checkpoints) {
  if (path.values.size() < design.n + 1) throw ConfigError("estimate_series: path shorter than design");
  for (std::size_t j = 0; j < checkpoints.size(); ++j) {
    if (checkpoints[j] < 1 || checkpoints[j] > design.n) {
      throw ConfigError("estimate_series: checkpoints must lie in [1, n]");
    }
    if (j > 0 && checkpoints[j] <= checkpoints[j - 1]) {
      throw ConfigError("estimate_series: checkpoints must be strictly increasing");
    }
  }
  const auto& x = path.values;
  const double delta = design.delta;
  const double theta = params.theta;
  const double lambda = sigma.lambda();

  std::vector<EstimateRecord> out;
  out.reserve(checkpoints.size());
  double cross = 0.0;   // sum x_{i-1}(x_i - x_{i-1})
  double energy = 0.0;  // sum x_{i-1}^2
  std::size_t i = 0;
  for (const std::size_t k : checkpoints) {
    for (; i < k; ++i) {
      cross += x[i] * (x[i + 1] - x[i]);
      energy += x[i] * x[i];
    }
    EstimateRecord rec;
    rec.k = k;
    rec.horizon = static_cast<double>(k) * delta;
    if (energy > 0.0) {
      // sum x_{i-1} U_i = cross + theta * delta * energy
      const double noise = cross + theta * delta * energy;
      rec.theta_hat = -cross / (delta * energy);
      rec.numerator = noise / std::sqrt(rec.horizon * sigma.second_moment(rec.horizon));
      rec.denominator = energy / (static_cast<double>(k) * lambda);
      rec.normalized_error = rec.numerator / rec.denominator;
      rec.valid = true;
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<EstimateRecord> estimate_series(const fbm::Path& path, const fou::SamplingDesign& design,
                                            const fou::ModelParams& params, constants::SigmaMode mode,
                                            std::span<const std::size_t> checkpoints) {
  SigmaTable table(params, mode);
  return estimate_series(path, design, params, table, checkpoints);
}

double direct_normalized_error(double theta, double theta_hat, double horizon, double sigma_t) {
  return std::sqrt(horizon) / sigma_t * (theta - theta_hat);
}

}  // namespace fracou::estimators
