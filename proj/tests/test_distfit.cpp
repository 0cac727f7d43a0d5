#include "shadowboot/distfit.hpp"
#include "shadowboot/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

using namespace shadowboot;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed, double mu = 0.0,
                                  double sigma = 1.0) {
  Engine rng = substream(seed, 0);
  std::vector<double> v(n);
  for (auto &x : v) {
    x = mu + sigma * normal_quantile(std::max(uniform01(rng), 1e-300));
  }
  return v;
}

void expect_valid(const DensityCurve &c) {
  ASSERT_EQ(c.grid.size(), c.density.size());
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    EXPECT_TRUE(std::isfinite(c.grid[i]));
    EXPECT_TRUE(std::isfinite(c.density[i]));
    EXPECT_GE(c.density[i], 0.0);
    if (i > 0) {
      EXPECT_GT(c.grid[i], c.grid[i - 1]);
    }
  }
}

} // namespace

TEST(Distfit, HistogramExamples) {
  const auto h = histogram(std::vector<double>{0, 0.5, 1}, 2);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(h.edges, (std::vector<double>{0, 0.5, 1}));

  const auto c = histogram(std::vector<double>(9, 4.0), 5);
  EXPECT_EQ(std::count_if(c.counts.begin(), c.counts.end(), [](auto n) { return n > 0; }), 1);
  EXPECT_DOUBLE_EQ(c.edges.front(), 3.5);
  EXPECT_DOUBLE_EQ(c.edges.back(), 4.5);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto v = normal_sample(100 + 37 * seed, seed);
    const auto hs = histogram(v, 1 + seed * 7);
    EXPECT_EQ(std::accumulate(hs.counts.begin(), hs.counts.end(), std::size_t{0}), v.size());
  }
  EXPECT_THROW(histogram(std::vector<double>{}, 3), std::invalid_argument);
  EXPECT_THROW(histogram(std::vector<double>{1.0}, 0), std::invalid_argument);
  EXPECT_THROW(histogram(std::vector<double>{1.0, INFINITY}, 2), std::invalid_argument);
}

TEST(Distfit, Bandwidth) {
  // 1..5: s = sqrt(2.5), IQR = 2 -> 2 / 1.34 is smaller.
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_NEAR(silverman_bandwidth(v), 0.9 * (2 / 1.34) * std::pow(5.0, -0.2), 1e-15);
  // Lattice with zero IQR falls back to s.
  const std::vector<double> lat = {0, 0, 0, 0, 0, 0, 0, 9};
  const double s = std::sqrt((7 * (9.0 / 8) * (9.0 / 8) + (63.0 / 8) * (63.0 / 8)) / 7);
  EXPECT_NEAR(silverman_bandwidth(lat), 0.9 * s * std::pow(8.0, -0.2), 1e-12);
}

TEST(Distfit, KdeOfNormalSample) {
  const auto v = normal_sample(10000, 11);
  const double h = silverman_bandwidth(v);
  EXPECT_NEAR(kde_at(v, h, 0.0), 1.0 / std::sqrt(2 * std::numbers::pi),
              0.1 / std::sqrt(2 * std::numbers::pi));
  const auto c = kde_curve(v, 200);
  expect_valid(c);
  EXPECT_NEAR(trapezoid_integral(c), 1.0, 0.02);
}

TEST(Distfit, KdeSymmetry) {
  const auto half = normal_sample(500, 12, 0.3, 0.8);
  std::vector<double> v;
  for (double x : half) {
    v.push_back(x);
    v.push_back(-x);
  }
  const auto c = kde_curve(v, 101);
  const std::size_t n = c.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(c.grid[i], -c.grid[n - 1 - i]);
    EXPECT_NEAR(c.density[i], c.density[n - 1 - i], 1e-9);
  }
}

TEST(Distfit, KdeModeInTopHistogramBins) {
  // Sturges' rule for the histogram: ceil(log2(1000)) + 1 = 11 bins.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = normal_sample(1000, 100 + seed, 0.05 * seed, 0.06);
    const auto c = kde_curve(v, 200);
    const auto mode_at =
        c.grid[std::max_element(c.density.begin(), c.density.end()) - c.density.begin()];
    const auto h = histogram(v, 11);
    auto order = std::vector<std::size_t>(h.counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return h.counts[a] > h.counts[b]; });
    std::size_t mode_bin = 0;
    while (mode_bin + 1 < h.counts.size() && mode_at >= h.edges[mode_bin + 1]) {
      ++mode_bin;
    }
    EXPECT_TRUE(mode_bin == order[0] || mode_bin == order[1]) << seed;
  }
}

TEST(Distfit, KdeOnLatticeData) {
  // Bootstrap replicates of small samples sit on a lattice; the curve must
  // still be finite and normalized.
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) {
    v.push_back((i % 7) * 0.009 - 0.027);
  }
  const auto c = kde_curve(v, 300);
  expect_valid(c);
  EXPECT_NEAR(trapezoid_integral(c), 1.0, 0.02);
  EXPECT_THROW(kde_curve(std::vector<double>(5, 1.0), 10), std::invalid_argument);
  EXPECT_THROW(kde_curve(std::vector<double>{1.0, 2.0}, 1), std::invalid_argument);
}

TEST(Distfit, GaussianCurve) {
  const GaussianApprox g{0.2, 0.05};
  const auto c = gaussian_pdf_curve(g, 201);
  expect_valid(c);
  EXPECT_NEAR(c.grid[100], 0.2, 1e-12);
  EXPECT_NEAR(c.density[100], 1.0 / (0.05 * std::sqrt(2 * std::numbers::pi)), 1e-9);
  EXPECT_NEAR(trapezoid_integral(c), 1.0, 1e-3);
  EXPECT_NEAR(c.grid.front(), 0.2 - 0.25, 1e-12);
  EXPECT_NEAR(c.grid.back(), 0.2 + 0.25, 1e-12);

  const auto std_curve = gaussian_pdf_curve({0, 1}, 11);
  EXPECT_NEAR(std_curve.density[4], 0.2420, 5e-5);
  EXPECT_NEAR(std_curve.density[6], 0.2420, 5e-5);
  EXPECT_THROW(gaussian_pdf_curve({0, 0}, 11), std::invalid_argument);
}
