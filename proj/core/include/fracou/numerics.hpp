#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fracou::numerics {

/// Reproducible stream of standard normal draws identified by (seed, stream_id).
///
/// The generation method is fixed so that output does not depend on the
/// standard library vendor: std::seed_seq over the four 32-bit halves of
/// (seed, stream_id) seeds a std::mt19937_64; uniforms take the top 53 bits
/// of each engine output; normals come from the Marsaglia polar method,
/// returning both values of each accepted pair in order.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double next_normal();
  void fill_normal(std::span<double> out);

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<double> normal_stream(std::uint64_t seed, std::uint64_t stream_id, std::size_t count);

/// Standard normal CDF, P(N <= z).
double std_normal_cdf(double z);

/// Gamma function for x > 0. Throws std::domain_error otherwise.
double gamma_fn(double x);

/// One-sample Kolmogorov-Smirnov statistic of `sample` against N(0,1).
double ks_statistic_normal(std::span<const double> sample);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

double median(std::vector<double> values);

}  // namespace fracou::numerics
