#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracou/fbm.hpp"
#include "fracou/numerics.hpp"

namespace fracou::fou {

/// Drift and Hurst index of dX = -theta X dt + dB^H in the ergodic regime:
/// theta > 0 and H in (1/2, 1).
struct ModelParams {
  ModelParams(double theta, fbm::Hurst hurst);

  double theta;
  fbm::Hurst hurst;
};

/// Observation design delta = n^{-alpha}, horizon = n * delta.
struct SamplingDesign {
  std::size_t n;
  double alpha;
  double delta;
  double horizon;
  /// alpha > 1/(2H+1), required by the pathwise limit theorems.
  bool asclt_admissible;

  fbm::TimeGrid grid() const { return fbm::TimeGrid(n, delta); }
};

SamplingDesign make_design(std::size_t n, double alpha, fbm::Hurst hurst);

/// Lower end of the admissible alpha range, 1/(2H+1).
double asclt_alpha_lower_bound(fbm::Hurst hurst);

struct RefinementFactor {
  explicit RefinementFactor(unsigned m = 8);
  unsigned m;
};

struct FouSample {
  fbm::Path driver;   // B on the observation grid
  fbm::Path process;  // X on the observation grid
};

/// Euler scheme on the sub-grid of step grid.step / m driven by exact fBm
/// increments, subsampled to the observation grid. theta = 0 is accepted
/// (X then equals B); theta < 0 is rejected.
FouSample simulate_fou_with_driver(double theta, fbm::Hurst hurst, const fbm::TimeGrid& grid,
                                   RefinementFactor refinement, numerics::SeededStream& stream);

fbm::Path simulate_fou(double theta, fbm::Hurst hurst, const fbm::TimeGrid& grid,
                       RefinementFactor refinement, numerics::SeededStream& stream);

inline fbm::Path simulate_fou(const ModelParams& params, const fbm::TimeGrid& grid,
                              RefinementFactor refinement, numerics::SeededStream& stream) {
  return simulate_fou(params.theta, params.hurst, grid, refinement, stream);
}

/// Euler recursion on given fine increments; exposed so coupled
/// refinements can share one driving noise.
std::vector<double> euler_from_increments(double theta, double fine_step,
                                          std::span<const double> fine_increments);

}  // namespace fracou::fou
