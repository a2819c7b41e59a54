#include "fracou/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "fracou/error.hpp"
#include "fracou/estimators.hpp"
#include "fracou/fou.hpp"
#include "fracou/numerics.hpp"

#ifndef FRACOU_VERSION
#define FRACOU_VERSION "0.0.0"
#endif

namespace fracou::harness {
namespace {

using numerics::median;

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + std::string(key) + "' expects a nonnegative integer, got '" + s + "'");
  }
  return v;
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view key, std::string_view text, Parse parse) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(static_cast<T>(parse(key, piece)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

fou::ModelParams model(const ExperimentConfig& c) { return fou::ModelParams(c.theta, fbm::Hurst(c.hurst)); }

nlohmann::ordered_json provenance(const ExperimentConfig& c, ExperimentKind kind) {
  nlohmann::ordered_json p;
  p["tool"] = "fracou";
  p["version"] = version();
  p["seed"] = c.seed;
  p["config"] = c.to_json(kind);
  return p;
}

}  // namespace

std::string version() { return FRACOU_VERSION; }

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::consistency: return "consistency";
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::asclt: return "asclt";
  }
  return "unknown";
}

void ExperimentConfig::apply(std::string_view key_in, std::string_view value) {
  const std::string key = trim(key_in);
  const std::string v = trim(value);
  if (key == "theta") {
    theta = parse_double(key, v);
  } else if (key == "hurst") {
    hurst = parse_double(key, v);
  } else if (key == "alpha") {
    alpha = parse_double(key, v);
  } else if (key == "n") {
    n = parse_uint(key, v);
  } else if (key == "ladder") {
    n_ladder = parse_list<std::size_t>(key, v, parse_uint);
  } else if (key == "reps") {
    replications = parse_uint(key, v);
  } else if (key == "seed") {
    seed = parse_uint(key, v);
  } else if (key == "refine") {
    refine = static_cast<unsigned>(parse_uint(key, v));
  } else if (key == "ratio") {
    checkpoint_ratio = parse_double(key, v);
  } else if (key == "dense") {
    if (v != "true" && v != "false" && v != "1" && v != "0") {
      throw ConfigError("config: 'dense' expects true or false");
    }
    dense_checkpoints = (v == "true" || v == "1");
  } else if (key == "sigma-mode") {
    sigma_mode = constants::parse_sigma_mode(v);
  } else if (key == "normalizer") {
    normalizer = asclt::parse_normalizer(v);
  } else if (key == "z-min") {
    z_min = parse_double(key, v);
  } else if (key == "z-max") {
    z_max = parse_double(key, v);
  } else if (key == "z-points") {
    z_points = parse_uint(key, v);
  } else if (key == "il-t") {
    il_t = parse_list<double>(key, v, parse_double);
  } else if (key == "quad-tol") {
    quadrature.rel_tol = parse_double(key, v);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_uint(key, v));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::apply_lines(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply(std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
  }
}

std::vector<double> ExperimentConfig::z_grid() const {
  std::vector<double> grid(z_points);
  if (z_points == 1) {
    grid[0] = z_min;
    return grid;
  }
  const double step = (z_max - z_min) / static_cast<double>(z_points - 1);
  for (std::size_t i = 0; i < z_points; ++i) grid[i] = z_min + step * static_cast<double>(i);
  return grid;
}

void ExperimentConfig::validate(ExperimentKind kind) const {
  const auto params = model(*this);  // theta > 0, H in (1/2, 1)
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (refine < 1) throw ConfigError("refine must be >= 1");
  if (kind == ExperimentKind::consistency) {
    if (n_ladder.empty()) throw ConfigError("consistency: empty n ladder");
    for (const auto m : n_ladder) {
      if (m < 2) throw ConfigError("consistency: every ladder entry must be >= 2");
    }
    return;
  }
  if (!(hurst < 0.75)) throw ConfigError("normalized error requires H in (1/2, 3/4)");
  if (n < 2) throw ConfigError("n must be >= 2");
  if (kind == ExperimentKind::asclt) {
    const double lower = fou::asclt_alpha_lower_bound(params.hurst);
    if (!(alpha > lower)) {
      std::ostringstream msg;
      msg << "asclt: design constraint 1/(2H+1) < alpha < 1 violated (alpha = " << alpha
          << ", 1/(2H+1) = " << lower << ")";
      throw ConfigError(msg.str());
    }
    if (!dense_checkpoints && !(checkpoint_ratio > 1.0)) throw ConfigError("asclt: ratio must exceed 1");
    if (z_points < 1 || !(z_max >= z_min)) throw ConfigError("asclt: invalid z grid");
    if (normalizer == asclt::Normalizer::log_n && n < 2) throw ConfigError("asclt: log normalizer needs n >= 2");
  }
}

nlohmann::ordered_json ExperimentConfig::to_json(ExperimentKind kind) const {
  nlohmann::ordered_json j;
  j["theta"] = theta;
  j["hurst"] = hurst;
  j["alpha"] = alpha;
  j["reps"] = replications;
  j["seed"] = seed;
  j["refine"] = refine;
  if (kind == ExperimentKind::consistency) {
    j["ladder"] = n_ladder;
  } else {
    j["n"] = n;
    j["sigma_mode"] = constants::to_string(sigma_mode);
    if (sigma_mode == constants::SigmaMode::quadrature) j["quad_tol"] = quadrature.rel_tol;
  }
  if (kind == ExperimentKind::asclt) {
    j["checkpoints"] = dense_checkpoints ? std::string("dense") : std::string("geometric");
    if (!dense_checkpoints) j["ratio"] = checkpoint_ratio;
    j["normalizer"] = asclt::to_string(normalizer);
    j["z_min"] = z_min;
    j["z_max"] = z_max;
    j["z_points"] = z_points;
    j["il_t"] = il_t;
  }
  return j;
}

Report run_consistency(const ExperimentConfig& config) {
  config.validate(ExperimentKind::consistency);
  const auto params = model(config);
  const fou::RefinementFactor refinement(config.refine);

  Report report;
  report.kind = "consistency";
  report.provenance = provenance(config, ExperimentKind::consistency);
  Table rows{"replications", {"n", "seed", "theta_hat", "abs_err"}, {}};
  nlohmann::ordered_json per_n = nlohmann::ordered_json::array();
  std::vector<double> medians;

  for (const std::size_t n : config.n_ladder) {
    const auto design = fou::make_design(n, config.alpha, params.hurst);
    std::vector<double> theta_hat(config.replications, 0.0);
    std::vector<char> ok(config.replications, 0);
    parallel_for(config.replications, config.threads, [&](std::size_t j) {
      numerics::SeededStream stream(config.seed, j);
      const auto path = fou::simulate_fou(params, design.grid(), refinement, stream);
      try {
        theta_hat[j] = estimators::discrete_lse(path, design.delta);
        ok[j] = 1;
      } catch (const DegeneratePathError&) {
        ok[j] = 0;
      }
    });
    std::vector<double> errs;
    for (std::size_t j = 0; j < config.replications; ++j) {
      if (!ok[j]) continue;
      const double err = std::abs(theta_hat[j] - params.theta);
      errs.push_back(err);
      rows.rows.push_back({static_cast<double>(n), static_cast<double>(j), theta_hat[j], err});
    }
    nlohmann::ordered_json entry;
    entry["n"] = n;
    entry["delta"] = design.delta;
    entry["horizon"] = design.horizon;
    entry["median_abs_err"] = errs.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(median(errs));
    entry["failed"] = config.replications - errs.size();
    per_n.push_back(entry);
    if (!errs.empty()) medians.push_back(median(errs));
  }
  bool decreasing = medians.size() == config.n_ladder.size();
  for (std::size_t i = 1; decreasing && i < medians.size(); ++i) decreasing = medians[i] < medians[i - 1];

  report.summary["per_n"] = per_n;
  report.summary["medians_strictly_decreasing"] = decreasing;
  report.tables.push_back(std::move(rows));
  return report;
}

Report run_clt(const ExperimentConfig& config) {
  config.validate(ExperimentKind::clt);
  const auto params = model(config);
  const fou::RefinementFactor refinement(config.refine);
  const auto design = fou::make_design(config.n, config.alpha, params.hurst);
  estimators::SigmaTable sigma(params, config.sigma_mode, config.quadrature);
  const double sigma_t = sigma.sigma(design.horizon);

  std::vector<double> err(config.replications, 0.0);
  std::vector<char> ok(config.replications, 0);
  parallel_for(config.replications, config.threads, [&](std::size_t j) {
    numerics::SeededStream stream(config.seed, j);
    const auto path = fou::simulate_fou(params, design.grid(), refinement, stream);
    try {
      const double th = estimators::discrete_lse(path, design.delta);
      err[j] = estimators::direct_normalized_error(params.theta, th, design.horizon, sigma_t);
      ok[j] = 1;
    } catch (const DegeneratePathError&) {
      ok[j] = 0;
    }
  });

  Report report;
  report.kind = "clt";
  report.provenance = provenance(config, ExperimentKind::clt);
  Table rows{"replications", {"seed", "norm_err"}, {}};
  std::vector<double> sample;
  for (std::size_t j = 0; j < config.replications; ++j) {
    if (!ok[j]) continue;
    sample.push_back(err[j]);
    rows.rows.push_back({static_cast<double>(j), err[j]});
  }
  if (sample.empty()) throw NumericError("clt: every replication produced a degenerate path");
  double mean = 0.0;
  for (const double x : sample) mean += x;
  mean /= static_cast<double>(sample.size());
  double var = 0.0;
  for (const double x : sample) var += (x - mean) * (x - mean);
  var = sample.size() > 1 ? var / static_cast<double>(sample.size() - 1) : 0.0;

  report.summary["n"] = design.n;
  report.summary["delta"] = design.delta;
  report.summary["horizon"] = design.horizon;
  report.summary["sigma"] = sigma_t;
  report.summary["sigma_mode"] = constants::to_string(config.sigma_mode);
  report.summary["samples"] = sample.size();
  report.summary["failed"] = config.replications - sample.size();
  report.summary["mean"] = mean;
  report.summary["variance"] = var;
  report.summary["ks_statistic"] = numerics::ks_statistic_normal(sample);
  report.tables.push_back(std::move(rows));
  return report;
}

namespace {

struct AscltPathResult {
  std::vector<estimators::EstimateRecord> records;
  double kolmogorov = 0.0;
  double kolmogorov_quarter = 0.0;
  std::size_t n_valid = 0;
  std::vector<std::complex<double>> il;
  std::vector<double> cdf;
};

AscltPathResult analyse_series(const asclt::CheckpointSeries& series, asclt::Normalizer normalizer,
                               const std::vector<double>& z_grid, const std::vector<double>& il_t) {
  AscltPathResult out;
  out.n_valid = series.size();
  const asclt::LogAveragedDistribution dist(series, normalizer);
  out.kolmogorov = asclt::kolmogorov_distance(dist, z_grid);
  const std::size_t quarter = std::max<std::size_t>(series.size() / 4, 1);
  auto head = series.prefix(quarter);
  if (normalizer == asclt::Normalizer::log_n && head.max_k() < 2) head = series.prefix(std::min<std::size_t>(2, series.size()));
  out.kolmogorov_quarter = asclt::kolmogorov_distance(asclt::LogAveragedDistribution(head, normalizer), z_grid);
  out.cdf.reserve(z_grid.size());
  for (const double z : z_grid) out.cdf.push_back(dist.cdf(z));
  if (series.max_k() >= 2) {
    for (const double t : il_t) out.il.push_back(asclt::il_delta(series, t, asclt::std_normal_charfn));
  }
  return out;
}

void append_cdf_rows(Table& table, double seed, const std::vector<double>& z_grid, const std::vector<double>& cdf) {
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const double g = numerics::std_normal_cdf(z_grid[i]);
    table.rows.push_back({seed, z_grid[i], cdf[i], g, std::abs(cdf[i] - g)});
  }
}

}  // namespace

Report run_asclt(const ExperimentConfig& config) {
  config.validate(ExperimentKind::asclt);
  const auto params = model(config);
  const fou::RefinementFactor refinement(config.refine);
  const auto design = fou::make_design(config.n, config.alpha, params.hurst);
  const auto checkpoints = config.dense_checkpoints ? estimators::dense_checkpoints(design.n)
                                                    : estimators::geometric_checkpoints(design.n, config.checkpoint_ratio);
  estimators::SigmaTable sigma(params, config.sigma_mode, config.quadrature);
  // Fill the sigma cache before fanning out so workers only read it.
  for (const auto k : checkpoints) sigma.second_moment(static_cast<double>(k) * design.delta);
  const auto z_grid = config.z_grid();

  std::vector<AscltPathResult> results(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t j) {
    numerics::SeededStream stream(config.seed, j);
    const auto path = fou::simulate_fou(params, design.grid(), refinement, stream);
    auto records = estimators::estimate_series(path, design, params, sigma, checkpoints);
    std::vector<std::size_t> ks;
    std::vector<double> values;
    for (const auto& r : records) {
      if (!r.valid) continue;
      ks.push_back(r.k);
      values.push_back(r.normalized_error);
    }
    if (ks.empty()) throw NumericError("asclt: no valid checkpoint on replication " + std::to_string(j));
    results[j] = analyse_series(asclt::CheckpointSeries(std::move(ks), std::move(values)), config.normalizer,
                                z_grid, config.il_t);
    results[j].records = std::move(records);
  });

  Report report;
  report.kind = "asclt";
  report.provenance = provenance(config, ExperimentKind::asclt);
  Table series{"series", {"seed", "k", "T_k", "theta_hat", "norm_err"}, {}};
  Table cdf{"cdf", {"seed", "z", "empirical", "gaussian", "abs_gap"}, {}};
  Table il{"il_delta", {"seed", "t", "re", "im", "abs"}, {}};
  nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
  std::vector<double> dist_full;
  std::vector<double> dist_quarter;
  for (std::size_t j = 0; j < results.size(); ++j) {
    const auto& r = results[j];
    const double seed = static_cast<double>(j);
    for (const auto& rec : r.records) {
      if (!rec.valid) continue;
      series.rows.push_back({seed, static_cast<double>(rec.k), rec.horizon, rec.theta_hat, rec.normalized_error});
    }
    append_cdf_rows(cdf, seed, z_grid, r.cdf);
    for (std::size_t i = 0; i < r.il.size(); ++i) {
      il.rows.push_back({seed, config.il_t[i], r.il[i].real(), r.il[i].imag(), std::abs(r.il[i])});
    }
    nlohmann::ordered_json e;
    e["seed"] = j;
    e["kolmogorov"] = r.kolmogorov;
    e["kolmogorov_quarter"] = r.kolmogorov_quarter;
    e["n_checkpoints"] = r.n_valid;
    per_seed.push_back(e);
    dist_full.push_back(r.kolmogorov);
    dist_quarter.push_back(r.kolmogorov_quarter);
  }
  report.summary["n"] = design.n;
  report.summary["delta"] = design.delta;
  report.summary["horizon"] = design.horizon;
  report.summary["normalizer"] = asclt::to_string(config.normalizer);
  report.summary["n_checkpoints"] = checkpoints.size();
  report.summary["median_kolmogorov"] = median(dist_full);
  report.summary["median_kolmogorov_quarter"] = median(dist_quarter);
  report.summary["per_seed"] = per_seed;
  report.tables.push_back(std::move(series));
  report.tables.push_back(std::move(cdf));
  report.tables.push_back(std::move(il));
  return report;
}

Report asclt_from_estimates(const Table& estimates, asclt::Normalizer normalizer,
                            const std::vector<double>& z_grid) {
  const auto col = [&](const std::string& name) {
    const auto it = std::find(estimates.columns.begin(), estimates.columns.end(), name);
    if (it == estimates.columns.end()) throw ConfigError("estimate table lacks column '" + name + "'");
    return static_cast<std::size_t>(it - estimates.columns.begin());
  };
  const std::size_t ck = col("k");
  const std::size_t ce = col("norm_err");
  std::vector<std::size_t> ks;
  std::vector<double> values;
  for (const auto& row : estimates.rows) {
    if (!std::isfinite(row[ce])) continue;
    ks.push_back(static_cast<std::size_t>(row[ck]));
    values.push_back(row[ce]);
  }
  if (ks.empty()) throw NumericError("asclt: estimate table has no finite normalized errors");
  const asclt::LogAveragedDistribution dist(asclt::CheckpointSeries(std::move(ks), std::move(values)), normalizer);

  Report report;
  report.kind = "asclt";
  Table cdf{"cdf", {"z", "empirical", "gaussian", "abs_gap"}, {}};
  for (const double z : z_grid) {
    const double e = dist.cdf(z);
    const double g = numerics::std_normal_cdf(z);
    cdf.rows.push_back({z, e, g, std::abs(e - g)});
  }
  report.summary["kolmogorov"] = asclt::kolmogorov_distance(dist, z_grid);
  report.summary["n_checkpoints"] = dist.series().size();
  report.summary["normalizer"] = asclt::to_string(normalizer);
  report.tables.push_back(std::move(cdf));
  return report;
}

}  // namespace fracou::harness
