// fracou command-line driver.
//
//   fracou simulate    --theta 1 --hurst 0.6 --alpha 0.6 --n 16384 --out run/
//   fracou estimate    --input run/simulate_path.csv --theta 1 --hurst 0.6
//   fracou constants   --theta 1 --hurst 0.6 --t 100
//   fracou consistency --ladder 4096,16384,65536 --reps 20
//   fracou clt         --n 16384 --reps 500
//   fracou asclt       --n 262144 --ratio 1.009 --reps 10
//   fracou asclt       --input run/estimate_series.csv
//
// A --config file holds key=value lines (same keys as the long flags) and
// takes precedence over flags. Exit codes: 0 ok, 2 bad configuration,
// 3 numerical failure, 1 anything else (I/O).

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fracou/constants.hpp"
#include "fracou/error.hpp"
#include "fracou/estimators.hpp"
#include "fracou/fou.hpp"
#include "fracou/harness.hpp"
#include "fracou/report.hpp"

namespace {

using namespace fracou;
using harness::ExperimentConfig;
using harness::Report;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Raw option text per key; applied to ExperimentConfig in one place so flag
// and file values share parsing and validation.
struct Options {
  std::map<std::string, std::string> values;
  std::string config_file;
  std::string out_dir;
  std::string format = "csv";
  std::string input;
  double horizon = 0.0;
};

void add_key(CLI::App* cmd, Options& opts, const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      "--" + key, [&opts, key](const std::string& v) { opts.values[key] = v; }, help);
}

void add_model_flags(CLI::App* cmd, Options& opts) {
  add_key(cmd, opts, "theta", "drift parameter (> 0)");
  add_key(cmd, opts, "hurst", "Hurst index in (1/2, 1)");
  add_key(cmd, opts, "alpha", "design exponent, delta = n^-alpha");
  add_key(cmd, opts, "n", "number of observations");
  add_key(cmd, opts, "seed", "base seed; replication j uses stream j");
  add_key(cmd, opts, "refine", "Euler sub-steps per observation step");
  cmd->add_option("--config", opts.config_file, "key=value file; overrides flags")->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "output directory");
}

void add_experiment_flags(CLI::App* cmd, Options& opts) {
  add_model_flags(cmd, opts);
  add_key(cmd, opts, "reps", "replications");
  add_key(cmd, opts, "sigma-mode", "asymptotic | quadrature");
  add_key(cmd, opts, "quad-tol", "relative tolerance of E(F_t^2) quadrature");
  add_key(cmd, opts, "threads", "worker threads (0 = all cores)");
  cmd->add_option("--format", opts.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

void add_asclt_flags(CLI::App* cmd, Options& opts) {
  add_key(cmd, opts, "normalizer", "harmonic | log");
  add_key(cmd, opts, "ratio", "geometric checkpoint ratio (> 1)");
  add_key(cmd, opts, "dense", "use every k as a checkpoint (true | false)");
  add_key(cmd, opts, "z-min", "lower end of the z grid");
  add_key(cmd, opts, "z-max", "upper end of the z grid");
  add_key(cmd, opts, "z-points", "number of z grid points");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const Options& opts) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : opts.values) cfg.apply(key, value);
  if (!opts.config_file.empty()) cfg.apply_lines(read_file(opts.config_file));
  return cfg;
}

harness::Format parse_format(const std::string& f) {
  return f == "json" ? harness::Format::json : harness::Format::csv;
}

void finish(const Report& report, const Options& opts) {
  if (!opts.out_dir.empty()) {
    for (const auto& p : harness::emit(report, parse_format(opts.format), opts.out_dir)) {
      std::cerr << "wrote " << p.string() << '\n';
    }
  }
  std::cout << report.summary.dump(2) << '\n';
}

fbm::Path path_from_table(const harness::Table& table) {
  const auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (table.columns[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto ct = col("t");
  const auto cx = col("x");
  if (!ct || !cx) throw ConfigError("path file needs columns t and x");
  if (table.rows.size() < 2) throw ConfigError("path file needs at least two rows");
  const double step = table.rows[1][*ct] - table.rows[0][*ct];
  fbm::Path path{fbm::TimeGrid(table.rows.size() - 1, step), {}};
  path.values.reserve(table.rows.size());
  for (const auto& row : table.rows) path.values.push_back(row[*cx]);
  return path;
}

int cmd_simulate(const Options& opts) {
  auto cfg = build_config(opts);
  const fou::ModelParams params(cfg.theta, fbm::Hurst(cfg.hurst));
  const auto design = fou::make_design(cfg.n, cfg.alpha, params.hurst);
  numerics::SeededStream stream(cfg.seed, 0);
  const auto sample =
      fou::simulate_fou_with_driver(params.theta, params.hurst, design.grid(), fou::RefinementFactor(cfg.refine), stream);

  Report report;
  report.kind = "simulate";
  harness::Table path{"path", {"i", "t", "fbm", "x"}, {}};
  path.rows.reserve(design.n + 1);
  for (std::size_t i = 0; i <= design.n; ++i) {
    path.rows.push_back({static_cast<double>(i), design.grid().time(i), sample.driver.values[i], sample.process.values[i]});
  }
  report.tables.push_back(std::move(path));
  report.summary["n"] = design.n;
  report.summary["delta"] = design.delta;
  report.summary["horizon"] = design.horizon;
  report.summary["asclt_admissible"] = design.asclt_admissible;
  report.provenance["tool"] = "fracou";
  report.provenance["version"] = harness::version();
  report.provenance["config"] = cfg.to_json(harness::ExperimentKind::consistency);
  finish(report, opts);
  return 0;
}

int cmd_estimate(const Options& opts) {
  auto cfg = build_config(opts);
  const fou::ModelParams params(cfg.theta, fbm::Hurst(cfg.hurst));
  fbm::Path path = [&] {
    if (!opts.input.empty()) return path_from_table(harness::parse_csv("path", read_file(opts.input)));
    const auto d = fou::make_design(cfg.n, cfg.alpha, params.hurst);
    numerics::SeededStream stream(cfg.seed, 0);
    return fou::simulate_fou(params, d.grid(), fou::RefinementFactor(cfg.refine), stream);
  }();
  const std::size_t n = path.grid.n;
  const double delta = path.grid.step;
  const double alpha = n > 1 ? -std::log(delta) / std::log(static_cast<double>(n)) : cfg.alpha;
  const fou::SamplingDesign design{n, alpha, delta, path.grid.horizon(),
                                   alpha > fou::asclt_alpha_lower_bound(params.hurst)};
  const auto checkpoints = cfg.dense_checkpoints ? estimators::dense_checkpoints(n)
                                                 : estimators::geometric_checkpoints(n, cfg.checkpoint_ratio);
  estimators::SigmaTable sigma(params, cfg.sigma_mode, cfg.quadrature);
  const auto records = estimators::estimate_series(path, design, params, sigma, checkpoints);

  Report report;
  report.kind = "estimate";
  harness::Table series{"series", {"k", "T_k", "theta_hat", "G_bar", "R_bar", "norm_err"}, {}};
  std::size_t flagged = 0;
  for (const auto& r : records) {
    if (!r.valid) {
      ++flagged;
      continue;
    }
    series.rows.push_back({static_cast<double>(r.k), r.horizon, r.theta_hat, r.numerator, r.denominator,
                           r.normalized_error});
  }
  report.tables.push_back(std::move(series));
  report.summary["n"] = n;
  report.summary["delta"] = delta;
  report.summary["horizon"] = design.horizon;
  report.summary["sigma_mode"] = constants::to_string(cfg.sigma_mode);
  report.summary["checkpoints"] = checkpoints.size();
  report.summary["flagged"] = flagged;
  if (!records.empty() && records.back().valid) report.summary["theta_hat"] = records.back().theta_hat;
  report.provenance["tool"] = "fracou";
  report.provenance["version"] = harness::version();
  report.provenance["input"] = opts.input;
  finish(report, opts);
  return 0;
}

int cmd_constants(const Options& opts) {
  auto cfg = build_config(opts);
  const fbm::Hurst hurst(cfg.hurst);
  const double t = opts.horizon > 0.0 ? opts.horizon : fou::make_design(cfg.n, cfg.alpha, hurst).horizon;
  const constants::KernelSpec spec(cfg.theta, hurst, t);
  nlohmann::ordered_json j;
  j["lambda"] = constants::lambda_const(cfg.theta, hurst);
  j["A"] = constants::big_a_const(cfg.theta, hurst);
  j["sigma_asymptotic"] = constants::sigma(spec, constants::SigmaMode::asymptotic);
  j["sigma_quadrature"] = constants::sigma(spec, constants::SigmaMode::quadrature, cfg.quadrature);
  j["t"] = t;
  const std::string text = j.dump(2) + "\n";
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    const auto file = std::filesystem::path(opts.out_dir) / "constants.json";
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + file.string());
    std::cerr << "wrote " << file.string() << '\n';
  }
  std::cout << text;
  return 0;
}

int cmd_experiment(harness::ExperimentKind kind, const Options& opts) {
  const auto cfg = build_config(opts);
  switch (kind) {
    case harness::ExperimentKind::consistency: finish(harness::run_consistency(cfg), opts); break;
    case harness::ExperimentKind::clt: finish(harness::run_clt(cfg), opts); break;
    case harness::ExperimentKind::asclt: finish(harness::run_asclt(cfg), opts); break;
  }
  return 0;
}

int cmd_asclt(const Options& opts) {
  if (opts.input.empty()) return cmd_experiment(harness::ExperimentKind::asclt, opts);
  const auto cfg = build_config(opts);
  const auto table = harness::parse_csv("series", read_file(opts.input));
  auto report = harness::asclt_from_estimates(table, cfg.normalizer, cfg.z_grid());
  report.provenance["tool"] = "fracou";
  report.provenance["version"] = harness::version();
  report.provenance["input"] = opts.input;
  finish(report, opts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift estimation for the fractional Ornstein-Uhlenbeck process"};
  app.require_subcommand(1);
  app.set_version_flag("--version", harness::version());

  Options opts;
  auto* simulate = app.add_subcommand("simulate", "simulate one fOU path (i, t, fbm, x)");
  add_model_flags(simulate, opts);

  auto* estimate = app.add_subcommand("estimate", "estimator series along one path");
  add_experiment_flags(estimate, opts);
  add_asclt_flags(estimate, opts);
  estimate->add_option("--input", opts.input, "path CSV with columns t, x (simulated if omitted)")
      ->check(CLI::ExistingFile);

  auto* consts = app.add_subcommand("constants", "lambda, A and sigma at horizon t (JSON)");
  add_experiment_flags(consts, opts);
  consts->add_option("--t", opts.horizon, "horizon (default n^(1-alpha))");

  auto* consistency = app.add_subcommand("consistency", "median |theta_hat - theta| along an n ladder");
  add_experiment_flags(consistency, opts);
  add_key(consistency, opts, "ladder", "comma-separated n values");

  auto* clt = app.add_subcommand("clt", "normalized error across replications");
  add_experiment_flags(clt, opts);

  auto* asclt = app.add_subcommand("asclt", "log-averaged CDF of the normalized error along each path");
  add_experiment_flags(asclt, opts);
  add_asclt_flags(asclt, opts);
  asclt->add_option("--input", opts.input, "estimate CSV (k, norm_err); runs the experiment if omitted")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(opts);
    if (*estimate) return cmd_estimate(opts);
    if (*consts) return cmd_constants(opts);
    if (*consistency) return cmd_experiment(harness::ExperimentKind::consistency, opts);
    if (*clt) return cmd_experiment(harness::ExperimentKind::clt, opts);
    if (*asclt) return cmd_asclt(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
