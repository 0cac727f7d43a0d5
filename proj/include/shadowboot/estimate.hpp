#ifndef SHADOWBOOT_ESTIMATE_HPP_
#define SHADOWBOOT_ESTIMATE_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowboot {

/// K contiguous groups of floor(N / K) entries; the N mod K tail is unused.
struct MoMConfig {
  std::size_t K;
  std::size_t group_size;

  static MoMConfig for_sample(std::size_t N, std::size_t K) {
    if (K == 0) {
      throw std::invalid_argument("median_of_means: K must be >= 1");
    }
    if (K > N) {
      throw std::invalid_argument("median_of_means: K = " + std::to_string(K) +
                                  " exceeds N = " + std::to_string(N));
    }
    return {K, N / K};
  }
};

inline double mean_estimate(std::span<const double> column) {
  if (column.empty()) {
    throw std::invalid_argument("mean_estimate: empty input");
  }
  double sum = 0.0;
  for (double v : column) {
    sum += v;
  }
  return sum / static_cast<double>(column.size());
}

/// Median of `values`, reordering them. Even sizes average the two central
/// order statistics.
inline double median_inplace(std::span<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median: empty input");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

/// Block means of the K contiguous groups, written to `out` (size K).
inline void group_means(std::span<const double> column, const MoMConfig &cfg,
                        std::span<double> out) {
  for (std::size_t k = 0; k < cfg.K; ++k) {
    double sum = 0.0;
    const std::size_t begin = k * cfg.group_size;
    for (std::size_t i = begin; i < begin + cfg.group_size; ++i) {
      sum += column[i];
    }
    out[k] = sum / static_cast<double>(cfg.group_size);
  }
}

inline double median_of_means(std::span<const double> column, std::size_t K) {
  const MoMConfig cfg = MoMConfig::for_sample(column.size(), K);
  if (K == 1) {
    return mean_estimate(column);
  }
  std::vector<double> means(K);
  group_means(column, cfg, means);
  return median_inplace(means);
}

} // namespace shadowboot

#endif // SHADOWBOOT_ESTIMATE_HPP_
