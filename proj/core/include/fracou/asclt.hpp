#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace fracou::asclt {

/// Statistic values G_k at strictly increasing checkpoints k >= 1.
class CheckpointSeries {
 public:
  CheckpointSeries(std::vector<std::size_t> ks, std::vector<double> values);

  /// Dense series with k = 1..values.size().
  static CheckpointSeries dense(std::vector<double> values);

  std::span<const std::size_t> ks() const noexcept { return ks_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return ks_.size(); }
  std::size_t max_k() const noexcept { return ks_.back(); }

  /// The first `count` entries.
  CheckpointSeries prefix(std::size_t count) const;

 private:
  std::vector<std::size_t> ks_;
  std::vector<double> values_;
};

/// harmonic: W = sum of 1/k over included k (a probability measure).
/// log_n: W = log(max k), the classical normalization; needs max k >= 2.
enum class Normalizer { harmonic, log_n };

std::string_view to_string(Normalizer n);
Normalizer parse_normalizer(std::string_view text);

/// Total weight W of checkpoints `ks` under `normalizer`.
double normalizer_weight(std::span<const std::size_t> ks, Normalizer normalizer);

/// Empirical measure (1/W) sum_k (1/k) delta_{G_k}.
class LogAveragedDistribution {
 public:
  LogAveragedDistribution(CheckpointSeries series, Normalizer normalizer);

  const CheckpointSeries& series() const noexcept { return series_; }
  Normalizer normalizer() const noexcept { return normalizer_; }
  double total_weight() const noexcept { return weight_; }

  /// (1/W) sum_k (1/k) 1{G_k <= z}. O(log m) after construction.
  double cdf(double z) const;

 private:
  CheckpointSeries series_;
  Normalizer normalizer_;
  double weight_;
  std::vector<double> sorted_values_;
  std::vector<double> cumulative_;  // cumulative (1/k)/W in sorted order
};

double log_avg_cdf(const LogAveragedDistribution& dist, double z);

double log_avg_functional(const LogAveragedDistribution& dist, const std::function<double(double)>& phi);

/// max over the grid of |log_avg_cdf(z) - Phi(z)|.
double kolmogorov_distance(const LogAveragedDistribution& dist, std::span<const double> z_grid);

/// (1/log n) sum_k (1/k) (e^{i t G_k} - limit_charfn(t)), n = max k.
std::complex<double> il_delta(const CheckpointSeries& series, double t,
                              const std::function<std::complex<double>(double)>& limit_charfn);

/// e^{-t^2/2}.
std::complex<double> std_normal_charfn(double t);

/// Paired sequences for the ratio (G/R) and sum (G+R) perturbation bounds,
/// indexed by k (default 1..n).
struct PerturbationPair {
  PerturbationPair(std::vector<double> g, std::vector<double> r);
  PerturbationPair(std::vector<std::size_t> ks, std::vector<double> g, std::vector<double> r);

  std::vector<std::size_t> ks;
  std::vector<double> g;
  std::vector<double> r;
};

struct Lemma31Record {
  double lhs;
  double u;  // deviation at z(1 - eps)
  double v;  // deviation at z(1 + eps)
  double tail_term;
  double rhs;
  bool holds;
};

struct Lemma32Record {
  double lhs;
  double t;  // deviation at z + eta
  double w;  // deviation at z - eta
  double tail_term;
  double rhs;
  bool holds;
};

inline constexpr double kInequalitySlack = 1e-12;

/// |avg 1{G_k <= z R_k} - Phi(z)| <= max(U, V) + avg 1{|R_k - 1| >= eps} + eps.
Lemma31Record lemma31_check(const PerturbationPair& pair, double z, double eps, Normalizer normalizer);

/// |avg 1{G_k + R_k <= z} - Phi(z)| <= max(T, W) + avg 1{|R_k| > eta} + eta / sqrt(2 pi).
Lemma32Record lemma32_check(const PerturbationPair& pair, double z, double eta, Normalizer normalizer);

}  // namespace fracou::asclt
