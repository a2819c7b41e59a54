#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracou/numerics.hpp"

namespace fracou::fbm {

/// Hurst index, validated to lie in (0, 1).
class Hurst {
 public:
  explicit Hurst(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Uniform grid t_i = i * step, i = 0..n.
struct TimeGrid {
  TimeGrid(std::size_t n, double step);

  std::size_t n;
  double step;

  double time(std::size_t i) const noexcept { return static_cast<double>(i) * step; }
  double horizon() const noexcept { return time(n); }
};

struct Path {
  TimeGrid grid;
  std::vector<double> values;  // n + 1 entries, values[0] == 0
};

/// R_H(t, s) = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double t, double s, Hurst hurst);

/// Autocovariance of fractional Gaussian noise with increments over `step`.
double fgn_autocovariance(std::size_t lag, Hurst hurst, double step);

inline constexpr std::size_t kDefaultCholeskyCap = 4096;

/// Exact sampler through the Cholesky factor of the covariance at t_1..t_n.
/// O(n^3); grids above `cap` are rejected.
Path sample_fbm_cholesky(const TimeGrid& grid, Hurst hurst, numerics::SeededStream& stream,
                         std::size_t cap = kDefaultCholeskyCap);

/// Stationary increments via circulant embedding (Davies-Harte), then
/// prefix sums. Embedding size is the smallest power of two >= 2n.
std::vector<double> sample_fgn_circulant(std::size_t n, Hurst hurst, double step,
                                         numerics::SeededStream& stream);

Path sample_fbm_circulant(const TimeGrid& grid, Hurst hurst, numerics::SeededStream& stream);

/// Prefix sums of increments with a leading zero.
std::vector<double> cumulative_path(std::span<const double> increments);

}  // namespace fracou::fbm
