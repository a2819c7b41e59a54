#include "fracou/fou.hpp"

#include <cmath>

#include "fracou/error.hpp"

namespace fracou::fou {

ModelParams::ModelParams(double theta_, fbm::Hurst hurst_) : theta(theta_), hurst(hurst_) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be positive (ergodic case)");
  if (!(hurst.value() > 0.5)) throw ConfigError("Hurst index must lie in (1/2, 1)");
}

double asclt_alpha_lower_bound(fbm::Hurst hurst) { return 1.0 / (2.0 * hurst.value() + 1.0); }

SamplingDesign make_design(std::size_t n, double alpha, fbm::Hurst hurst) {
  if (n < 1) throw ConfigError("design needs n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("design exponent alpha must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  SamplingDesign d{};
  d.n = n;
  d.alpha = alpha;
  d.delta = std::pow(nd, -alpha);
  d.horizon = nd * d.delta;
  d.asclt_admissible = alpha > asclt_alpha_lower_bound(hurst);
  return d;
}

RefinementFactor::RefinementFactor(unsigned m_) : m(m_) {
  if (m < 1) throw ConfigError("refinement factor must be >= 1");
}

std::vector<double> euler_from_increments(double theta, double fine_step,
                                          std::span<const double> fine_increments) {
  std::vector<double> x(fine_increments.size() + 1, 0.0);
  const double decay = theta * fine_step;
  for (std::size_t i = 0; i < fine_increments.size(); ++i) {
    x[i + 1] = x[i] - decay * x[i] + fine_increments[i];
  }
  return x;
}

FouSample simulate_fou_with_driver(double theta, fbm::Hurst hurst, const fbm::TimeGrid& grid,
                                   RefinementFactor refinement, numerics::SeededStream& stream) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be nonnegative");
  const std::size_t m = refinement.m;
  FouSample out{fbm::Path{grid, std::vector<double>(grid.n + 1, 0.0)},
                fbm::Path{grid, std::vector<double>(grid.n + 1, 0.0)}};
  if (grid.n == 0) return out;

  const double fine_step = grid.step / static_cast<double>(m);
  const auto increments = fbm::sample_fgn_circulant(grid.n * m, hurst, fine_step, stream);
  const auto fine_x = euler_from_increments(theta, fine_step, increments);
  const auto fine_b = fbm::cumulative_path(increments);
  for (std::size_t i = 1; i <= grid.n; ++i) {
    out.process.values[i] = fine_x[i * m];
    out.driver.values[i] = fine_b[i * m];
  }
  return out;
}

fbm::Path simulate_fou(double theta, fbm::Hurst hurst, const fbm::TimeGrid& grid,
                       RefinementFactor refinement, numerics::SeededStream& stream) {
  return simulate_fou_with_driver(theta, hurst, grid, refinement, stream).process;
}

}  // namespace fracou::fou
