#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fracou/asclt.hpp"
#include "fracou/constants.hpp"
#include "fracou/report.hpp"

namespace fracou::harness {

enum class ExperimentKind { consistency, clt, asclt };

std::string_view to_string(ExperimentKind kind);

struct ExperimentConfig {
  double theta = 1.0;
  double hurst = 0.6;
  double alpha = 0.6;
  std::size_t n = std::size_t{1} << 14;
  std::vector<std::size_t> n_ladder{std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16};
  std::size_t replications = 20;
  std::uint64_t seed = 1;
  unsigned refine = 8;
  double checkpoint_ratio = 1.05;
  bool dense_checkpoints = false;
  constants::SigmaMode sigma_mode = constants::SigmaMode::asymptotic;
  asclt::Normalizer normalizer = asclt::Normalizer::harmonic;
  double z_min = -4.0;
  double z_max = 4.0;
  std::size_t z_points = 801;
  std::vector<double> il_t{0.0, 0.5, 1.0, 2.0};
  constants::QuadratureConfig quadrature{};
  /// Worker threads for replications; 0 picks hardware concurrency. Has no
  /// effect on results.
  unsigned threads = 0;

  /// Applies one `key=value` setting (keys match the CLI long flags without
  /// dashes, e.g. `sigma-mode=quadrature`, `ladder=4096,16384`).
  void apply(std::string_view key, std::string_view value);

  /// Applies every `key=value` line of `text`; blank lines and `#` comments
  /// are skipped.
  void apply_lines(std::string_view text);

  std::vector<double> z_grid() const;

  /// Checks invariants for `kind`; throws ConfigError.
  void validate(ExperimentKind kind) const;

  nlohmann::ordered_json to_json(ExperimentKind kind) const;
};

/// Consistency study: per (n, replication) |theta_hat_n - theta| and medians.
Report run_consistency(const ExperimentConfig& config);

/// Cross-replication sample of sqrt(T_n)/sigma_{T_n} (theta - theta_hat_n).
Report run_clt(const ExperimentConfig& config);

/// Per-seed log-averaged CDF of the normalized error over checkpoints.
Report run_asclt(const ExperimentConfig& config);

/// ASCLT summary from an estimate table (columns k, norm_err at least).
Report asclt_from_estimates(const Table& estimates, asclt::Normalizer normalizer,
                            const std::vector<double>& z_grid);

std::string version();

}  // namespace fracou::harness
