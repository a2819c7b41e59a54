#include "fracou/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "fracou/error.hpp"

namespace fracou::fbm {
namespace {

// Planner calls are not thread-safe in FFTW; execution with new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* data;
};

// In-place forward DFT (sign -1).
void forward_dft(FftwBuffer& buf, std::size_t n) {
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericError("FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

std::size_t embedding_size(std::size_t n) {
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  return m;
}

}  // namespace

Hurst::Hurst(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError("Hurst index must lie in (0, 1)");
  }
}

TimeGrid::TimeGrid(std::size_t n_, double step_) : n(n_), step(step_) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
}

double fbm_covariance(double t, double s, Hurst hurst) {
  const double two_h = 2.0 * hurst.value();
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(std::size_t lag, Hurst hurst, double step) {
  const double two_h = 2.0 * hurst.value();
  const double k = static_cast<double>(lag);
  const double scale = 0.5 * std::pow(step, two_h);
  if (lag == 0) return 2.0 * scale;
  return scale * (std::pow(k + 1.0, two_h) + std::pow(k - 1.0, two_h) - 2.0 * std::pow(k, two_h));
}

std::vector<double> cumulative_path(std::span<const double> increments) {
  std::vector<double> values(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) values[i + 1] = values[i] + increments[i];
  return values;
}

Path sample_fbm_cholesky(const TimeGrid& grid, Hurst hurst, numerics::SeededStream& stream,
                         std::size_t cap) {
  const std::size_t n = grid.n;
  if (n > cap) {
    std::ostringstream msg;
    msg << "Cholesky sampler: n = " << n << " exceeds the configured cap " << cap;
    throw ConfigError(msg.str());
  }
  Path path{grid, std::vector<double>(n + 1, 0.0)};
  if (n == 0) return path;

  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = fbm_covariance(grid.time(i + 1), grid.time(j + 1), hurst);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("Cholesky sampler: covariance is not numerically positive definite");
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.next_normal();
  const Eigen::VectorXd x = llt.matrixL() * z;
  for (std::size_t i = 0; i < n; ++i) path.values[i + 1] = x(static_cast<Eigen::Index>(i));
  return path;
}

std::vector<double> sample_fgn_circulant(std::size_t n, Hurst hurst, double step,
                                         numerics::SeededStream& stream) {
  if (n == 0) throw ConfigError("circulant sampler needs n >= 1");
  const std::size_t m = embedding_size(n);

  // Eigenvalues of the circulant whose first row is gamma(min(j, m - j)).
  FftwBuffer buf(m);
  for (std::size_t j = 0; j < m; ++j) {
    buf.data[j][0] = fgn_autocovariance(std::min(j, m - j), hurst, step);
    buf.data[j][1] = 0.0;
  }
  forward_dft(buf, m);
  std::vector<double> eig(m);
  double max_eig = 0.0;
  double min_eig = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    eig[j] = buf.data[j][0];
    max_eig = std::max(max_eig, eig[j]);
    min_eig = std::min(min_eig, eig[j]);
  }
  if (min_eig < -1e-10 * max_eig) {
    std::ostringstream msg;
    msg << "circulant embedding of size " << m << " has eigenvalue " << min_eig
        << " below tolerance; use the Cholesky sampler instead";
    throw NumericError(msg.str());
  }

  // Re(FFT(sqrt(eig / m) * (z1 + i z2))) has covariance gamma on the first n lags.
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = std::sqrt(std::max(eig[j], 0.0) * inv_m);
    buf.data[j][0] = a * stream.next_normal();
    buf.data[j][1] = a * stream.next_normal();
  }
  forward_dft(buf, m);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf.data[i][0];
  return out;
}

Path sample_fbm_circulant(const TimeGrid& grid, Hurst hurst, numerics::SeededStream& stream) {
  const auto increments = sample_fgn_circulant(grid.n, hurst, grid.step, stream);
  return Path{grid, cumulative_path(increments)};
}

}  // namespace fracou::fbm
