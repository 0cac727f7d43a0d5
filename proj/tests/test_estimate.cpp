#include "shadowboot/estimate.hpp"
#include "shadowboot/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

using namespace shadowboot;

namespace {

std::vector<double> noisy_column(std::size_t n, std::uint64_t seed) {
  Engine rng = substream(seed, 0);
  std::vector<double> v(n);
  for (auto &x : v) {
    x = 9.0 * (2.0 * uniform01(rng) - 1.0);
  }
  return v;
}

} // namespace

TEST(Estimate, MeanExamples) {
  EXPECT_DOUBLE_EQ(mean_estimate(std::vector<double>{1, 2, 3, 4, 5, 6}), 3.5);
  EXPECT_DOUBLE_EQ(mean_estimate(std::vector<double>(17, -2.25)), -2.25);
  EXPECT_DOUBLE_EQ(mean_estimate(std::vector<double>{-9, 0, 9}), 0.0);
  EXPECT_THROW(mean_estimate(std::vector<double>{}), std::invalid_argument);
}

TEST(Estimate, MedianOfMeansExamples) {
  const std::vector<double> six = {1, 2, 3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(median_of_means(six, 3), 3.5);
  EXPECT_DOUBLE_EQ(median_of_means(std::vector<double>{1, 2, 3, 4}, 2), 2.5);
  // Remainder dropped: blocks {1,2}, {3,4}, {5,6}; 100 ignored.
  EXPECT_DOUBLE_EQ(median_of_means(std::vector<double>{1, 2, 3, 4, 5, 6, 100}, 3), 3.5);
  // Contiguous, not strided: strided blocks would be {1,4}, {2,5}, {3,6}.
  EXPECT_DOUBLE_EQ(median_of_means(std::vector<double>{1, 1, 0, 0, 9, 9}, 3), 1.0);
}

TEST(Estimate, MedianOfMeansErrors) {
  const std::vector<double> v = {1, 2, 3};
  EXPECT_THROW(median_of_means(v, 0), std::invalid_argument);
  EXPECT_THROW(median_of_means(v, 4), std::invalid_argument);
  EXPECT_NO_THROW(median_of_means(v, 3));
}

TEST(Estimate, SingleBlockIsMean) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = noisy_column(37 + seed, seed);
    EXPECT_EQ(median_of_means(v, 1), mean_estimate(v));
  }
}

TEST(Estimate, ShiftEquivariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto v = noisy_column(200, seed);
    const std::size_t K = 1 + seed % 10;
    const double base = median_of_means(v, K);
    for (auto &x : v) {
      x += 2.5;
    }
    EXPECT_NEAR(median_of_means(v, K), base + 2.5, 1e-12);
  }
}

TEST(Estimate, RobustToCorruptedBlocks) {
  const std::size_t K = 11;
  const std::size_t N = 1100;
  const auto clean = noisy_column(N, 4);
  const MoMConfig cfg = MoMConfig::for_sample(N, K);
  std::vector<double> means(K);
  group_means(clean, cfg, means);
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  const double spread = *hi - *lo;
  const double clean_mom = median_of_means(clean, K);

  for (std::size_t bad = 1; bad <= K / 2; ++bad) {
    auto dirty = clean;
    for (std::size_t k = 0; k < bad; ++k) {
      // Each corrupted block gets one huge entry.
      dirty[k * 2 * cfg.group_size % N] = 1e9;
    }
    EXPECT_LE(std::abs(median_of_means(dirty, K) - clean_mom), spread) << bad;
    EXPECT_GT(std::abs(mean_estimate(dirty) - mean_estimate(clean)), 1e5);
  }
}

TEST(Estimate, MedianEvenAndOdd) {
  std::vector<double> odd = {5, 1, 3};
  EXPECT_DOUBLE_EQ(median_inplace(odd), 3.0);
  std::vector<double> even = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(median_inplace(even), 2.5);
  std::vector<double> none;
  EXPECT_THROW(median_inplace(none), std::invalid_argument);
}
