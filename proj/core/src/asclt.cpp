#include "fracou/asclt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fracou/error.hpp"
#include "fracou/numerics.hpp"

namespace fracou::asclt {
namespace {

using numerics::std_normal_cdf;

void check_ks(std::span<const std::size_t> ks) {
  if (ks.empty()) throw ConfigError("checkpoint series must be nonempty");
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (ks[j] < 1) throw ConfigError("checkpoint indices must be >= 1");
    if (j > 0 && ks[j] <= ks[j - 1]) throw ConfigError("checkpoint indices must be strictly increasing");
  }
}

// (1/W) sum_k (1/k) 1{pred(j)}
template <class Pred>
double weighted_fraction(std::span<const std::size_t> ks, double weight, Pred pred) {
  double acc = 0.0;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (pred(j)) acc += 1.0 / static_cast<double>(ks[j]);
  }
  return acc / weight;
}

}  // namespace

CheckpointSeries::CheckpointSeries(std::vector<std::size_t> ks, std::vector<double> values)
    : ks_(std::move(ks)), values_(std::move(values)) {
  if (ks_.size() != values_.size()) throw ConfigError("checkpoint series: ks and values differ in length");
  check_ks(ks_);
}

CheckpointSeries CheckpointSeries::dense(std::vector<double> values) {
  std::vector<std::size_t> ks(values.size());
  std::iota(ks.begin(), ks.end(), std::size_t{1});
  return CheckpointSeries(std::move(ks), std::move(values));
}

CheckpointSeries CheckpointSeries::prefix(std::size_t count) const {
  count = std::min(count, size());
  return CheckpointSeries(std::vector<std::size_t>(ks_.begin(), ks_.begin() + static_cast<std::ptrdiff_t>(count)),
                          std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(count)));
}

std::string_view to_string(Normalizer n) { return n == Normalizer::harmonic ? "harmonic" : "log"; }

Normalizer parse_normalizer(std::string_view text) {
  if (text == "harmonic") return Normalizer::harmonic;
  if (text == "log" || text == "log_n") return Normalizer::log_n;
  throw ConfigError("normalizer must be 'harmonic' or 'log', got '" + std::string(text) + "'");
}

double normalizer_weight(std::span<const std::size_t> ks, Normalizer normalizer) {
  check_ks(ks);
  if (normalizer == Normalizer::log_n) {
    if (ks.back() < 2) throw ConfigError("log normalizer needs max k >= 2");
    return std::log(static_cast<double>(ks.back()));
  }
  double w = 0.0;
  for (const std::size_t k : ks) w += 1.0 / static_cast<double>(k);
  return w;
}

LogAveragedDistribution::LogAveragedDistribution(CheckpointSeries series, Normalizer normalizer)
    : series_(std::move(series)), normalizer_(normalizer), weight_(normalizer_weight(series_.ks(), normalizer)) {
  const auto ks = series_.ks();
  const auto vals = series_.values();
  std::vector<std::size_t> order(ks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  sorted_values_.reserve(order.size());
  cumulative_.reserve(order.size());
  double acc = 0.0;
  for (const std::size_t j : order) {
    acc += 1.0 / static_cast<double>(ks[j]);
    sorted_values_.push_back(vals[j]);
    cumulative_.push_back(acc / weight_);
  }
}

double LogAveragedDistribution::cdf(double z) const {
  const auto it = std::upper_bound(sorted_values_.begin(), sorted_values_.end(), z);
  if (it == sorted_values_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - sorted_values_.begin()) - 1];
}

double log_avg_cdf(const LogAveragedDistribution& dist, double z) { return dist.cdf(z); }

double log_avg_functional(const LogAveragedDistribution& dist, const std::function<double(double)>& phi) {
  const auto ks = dist.series().ks();
  const auto vals = dist.series().values();
  double acc = 0.0;
  for (std::size_t j = 0; j < ks.size(); ++j) acc += phi(vals[j]) / static_cast<double>(ks[j]);
  return acc / dist.total_weight();
}

double kolmogorov_distance(const LogAveragedDistribution& dist, std::span<const double> z_grid) {
  if (z_grid.empty()) throw ConfigError("kolmogorov_distance: empty grid");
  double d = 0.0;
  for (const double z : z_grid) d = std::max(d, std::abs(dist.cdf(z) - std_normal_cdf(z)));
  return d;
}

std::complex<double> std_normal_charfn(double t) { return {std::exp(-0.5 * t * t), 0.0}; }

std::complex<double> il_delta(const CheckpointSeries& series, double t,
                              const std::function<std::complex<double>(double)>& limit_charfn) {
  if (series.max_k() < 2) throw ConfigError("il_delta: needs max k >= 2");
  const std::complex<double> limit = limit_charfn(t);
  const auto ks = series.ks();
  const auto vals = series.values();
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const std::complex<double> term = std::polar(1.0, t * vals[j]) - limit;
    acc += term / static_cast<double>(ks[j]);
  }
  return acc / std::log(static_cast<double>(series.max_k()));
}

PerturbationPair::PerturbationPair(std::vector<double> g_, std::vector<double> r_)
    : PerturbationPair({}, std::move(g_), std::move(r_)) {}

PerturbationPair::PerturbationPair(std::vector<std::size_t> ks_, std::vector<double> g_, std::vector<double> r_)
    : ks(std::move(ks_)), g(std::move(g_)), r(std::move(r_)) {
  if (g.size() != r.size()) throw ConfigError("perturbation pair: G and R differ in length");
  if (ks.empty()) {
    ks.resize(g.size());
    std::iota(ks.begin(), ks.end(), std::size_t{1});
  }
  if (ks.size() != g.size()) throw ConfigError("perturbation pair: ks and G differ in length");
  check_ks(ks);
}

Lemma31Record lemma31_check(const PerturbationPair& pair, double z, double eps, Normalizer normalizer) {
  if (!(eps > 0.0)) throw ConfigError("lemma31_check: eps must be positive");
  for (const double r : pair.r) {
    if (!(r > 0.0)) throw ConfigError("lemma31_check: R entries must be positive");
  }
  const double w = normalizer_weight(pair.ks, normalizer);
  const auto& g = pair.g;
  const auto& r = pair.r;
  const double zl = z * (1.0 - eps);
  const double zu = z * (1.0 + eps);

  Lemma31Record rec{};
  rec.lhs = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] <= z * r[j]; }) -
                     std_normal_cdf(z));
  rec.u = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] <= zl; }) - std_normal_cdf(zl));
  rec.v = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] <= zu; }) - std_normal_cdf(zu));
  rec.tail_term = weighted_fraction(pair.ks, w, [&](std::size_t j) { return std::abs(r[j] - 1.0) >= eps; });
  rec.rhs = std::max(rec.u, rec.v) + rec.tail_term + eps;
  rec.holds = rec.lhs <= rec.rhs + kInequalitySlack;
  return rec;
}

Lemma32Record lemma32_check(const PerturbationPair& pair, double z, double eta, Normalizer normalizer) {
  if (!(eta > 0.0)) throw ConfigError("lemma32_check: eta must be positive");
  const double w = normalizer_weight(pair.ks, normalizer);
  const auto& g = pair.g;
  const auto& r = pair.r;
  const double zu = z + eta;
  const double zl = z - eta;

  Lemma32Record rec{};
  rec.lhs = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] + r[j] <= z; }) -
                     std_normal_cdf(z));
  rec.t = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] <= zu; }) - std_normal_cdf(zu));
  rec.w = std::abs(weighted_fraction(pair.ks, w, [&](std::size_t j) { return g[j] <= zl; }) - std_normal_cdf(zl));
  rec.tail_term = weighted_fraction(pair.ks, w, [&](std::size_t j) { return std::abs(r[j]) > eta; });
  rec.rhs = std::max(rec.t, rec.w) + rec.tail_term + eta / std::sqrt(2.0 * std::numbers::pi);
  rec.holds = rec.lhs <= rec.rhs + kInequalitySlack;
  return rec;
}

}  // namespace fracou::asclt
