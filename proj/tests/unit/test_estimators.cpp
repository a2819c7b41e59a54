#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fracou/constants.hpp"
#include "fracou/error.hpp"
#include "fracou/estimators.hpp"
#include "fracou/fou.hpp"
#include "fracou/numerics.hpp"

using namespace fracou;
using namespace fracou::estimators;

namespace {

fbm::Path hand_path(std::vector<double> v, double step) {
  return fbm::Path{fbm::TimeGrid(v.size() - 1, step), std::move(v)};
}

fbm::Path simulated(std::uint64_t id, std::size_t n = 4096) {
  const fou::ModelParams p(1.0, fbm::Hurst(0.6));
  const auto d = fou::make_design(n, 0.6, p.hurst);
  numerics::SeededStream s(42, id);
  return fou::simulate_fou(p, d.grid(), fou::RefinementFactor(), s);
}

}  // namespace

TEST(DiscreteLse, HandValues) {
  const std::vector<double> x{0.0, 1.0, 0.5};
  EXPECT_DOUBLE_EQ(discrete_lse(x, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(discrete_lse(x, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(continuous_lse_proxy(hand_path(x, 0.5), 0.5), 1.0);
}

TEST(DiscreteLse, FlatAfterFirstStepGivesZero) {
  const std::vector<double> x{0.0, 2.0, 2.0, 2.0, 2.0};
  EXPECT_EQ(discrete_lse(x, 0.1), 0.0);
}

TEST(DiscreteLse, DegenerateAndInvalidInput) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_THROW(discrete_lse(zeros, 0.1), DegeneratePathError);
  const std::vector<double> one{0.0};
  EXPECT_THROW(discrete_lse(one, 0.1), ConfigError);
  const std::vector<double> x{0.0, 1.0, 0.5};
  EXPECT_THROW(discrete_lse(x, 0.0), ConfigError);
}

TEST(DiscreteLse, ProxyEqualsDiscreteExactly) {
  const auto p = simulated(1);
  EXPECT_EQ(continuous_lse_proxy(p, 0.01), discrete_lse(p, 0.01));
}

TEST(DiscreteLse, AmplitudeInvariance) {
  const auto p = simulated(2);
  const double base = discrete_lse(p, 0.01);
  for (double c : {-3.0, 0.5, 4.0}) {
    std::vector<double> scaled(p.values);
    for (double& v : scaled) v *= c;
    EXPECT_NEAR(discrete_lse(scaled, 0.01) / base, 1.0, 1e-12) << c;
  }
}

TEST(DiscreteLse, TimeStepCovariance) {
  const auto p = simulated(3);
  const double base = discrete_lse(p, 0.01);
  for (double c : {0.25, 2.0, 10.0}) EXPECT_NEAR(discrete_lse(p, 0.01 * c) * c / base, 1.0, 1e-12);
}

TEST(Checkpoints, GeometricLadder) {
  const auto ks = geometric_checkpoints(100, 1.5);
  EXPECT_EQ(ks, (std::vector<std::size_t>{1, 2, 3, 4, 6, 9, 13, 19, 28, 42, 63, 94, 100}));
  EXPECT_EQ(geometric_checkpoints(1, 1.05), (std::vector<std::size_t>{1}));
  EXPECT_THROW(geometric_checkpoints(10, 1.0), ConfigError);
  EXPECT_EQ(dense_checkpoints(3), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(EstimateSeries, HandPathSingleCheckpoint) {
  const auto path = hand_path({0.0, 1.0, 0.5}, 1.0);
  const fou::SamplingDesign design{2, 0.0, 1.0, 2.0, false};
  const fou::ModelParams params(0.5, fbm::Hurst(0.6));
  const std::vector<std::size_t> ks{2};
  const auto recs = estimate_series(path, design, params, constants::SigmaMode::asymptotic, ks);
  ASSERT_EQ(recs.size(), 1u);
  ASSERT_TRUE(recs[0].valid);
  EXPECT_DOUBLE_EQ(recs[0].theta_hat, 0.5);
  const double sigma = SigmaTable(params, constants::SigmaMode::asymptotic).sigma(2.0);
  EXPECT_EQ(direct_normalized_error(params.theta, recs[0].theta_hat, 2.0, sigma), 0.0);
  // the representation also vanishes here since sum x U = 0 exactly
  EXPECT_NEAR(recs[0].normalized_error, 0.0, 1e-15);
}

TEST(EstimateSeries, FirstCheckpointIsFlagged) {
  const auto path = simulated(4, 64);
  const auto design = fou::make_design(64, 0.6, fbm::Hurst(0.6));
  const fou::ModelParams params(1.0, fbm::Hurst(0.6));
  const auto ks = dense_checkpoints(64);
  const auto recs = estimate_series(path, design, params, constants::SigmaMode::asymptotic, ks);
  EXPECT_FALSE(recs[0].valid);  // only x_0 = 0 has been seen
  for (std::size_t i = 1; i < recs.size(); ++i) EXPECT_TRUE(recs[i].valid);
}

TEST(EstimateSeries, RejectsBadCheckpoints) {
  const auto path = simulated(5, 64);
  const auto design = fou::make_design(64, 0.6, fbm::Hurst(0.6));
  const fou::ModelParams params(1.0, fbm::Hurst(0.6));
  const std::vector<std::size_t> unsorted{3, 2}, beyond{65}, zero{0};
  for (const auto* ks : {&unsorted, &beyond, &zero}) {
    EXPECT_THROW(estimate_series(path, design, params, constants::SigmaMode::asymptotic, *ks), ConfigError);
  }
}

TEST(EstimateSeries, IncrementalMatchesBatch) {
  const auto path = simulated(6);
  const auto design = fou::make_design(4096, 0.6, fbm::Hurst(0.6));
  const fou::ModelParams params(1.0, fbm::Hurst(0.6));
  const auto ks = geometric_checkpoints(4096, 1.3);
  const auto recs = estimate_series(path, design, params, constants::SigmaMode::asymptotic, ks);
  for (const auto& r : recs) {
    if (!r.valid) continue;
    const std::span<const double> head(path.values.data(), r.k + 1);
    EXPECT_NEAR(r.theta_hat, discrete_lse(head, design.delta), 1e-9 * std::max(1.0, std::abs(r.theta_hat)));
  }
}

TEST(EstimateSeries, RepresentationIdentity) {
  const fou::ModelParams params(1.0, fbm::Hurst(0.6));
  const auto design = fou::make_design(4096, 0.6, params.hurst);
  for (auto mode : {constants::SigmaMode::asymptotic, constants::SigmaMode::quadrature}) {
    SigmaTable table(params, mode);
    for (std::uint64_t id = 0; id < 3; ++id) {
      const auto path = simulated(10 + id);
      const auto ks = geometric_checkpoints(design.n, 1.2);
      for (const auto& r : estimate_series(path, design, params, table, ks)) {
        if (!r.valid) continue;
        const double direct = direct_normalized_error(params.theta, r.theta_hat, r.horizon, table.sigma(r.horizon));
        EXPECT_NEAR(r.normalized_error, direct, 1e-10 * std::max(1.0, std::abs(direct))) << "k=" << r.k;
      }
    }
  }
}

TEST(SigmaTable, CachesQuadrature) {
  const fou::ModelParams params(1.0, fbm::Hurst(0.6));
  SigmaTable table(params, constants::SigmaMode::quadrature);
  const double a = table.second_moment(5.0);
  EXPECT_EQ(table.second_moment(5.0), a);
  EXPECT_NEAR(a, 0.7083115, 1e-3);
  EXPECT_NEAR(table.sigma(5.0), std::sqrt(a) / constants::lambda_const(1.0, params.hurst), 1e-15);
}
