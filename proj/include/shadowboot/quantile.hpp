#ifndef SHADOWBOOT_QUANTILE_HPP_
#define SHADOWBOOT_QUANTILE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace shadowboot {

// Linear-interpolation quantile of sorted data: position p = 1 + alpha (B - 1)
// between order statistics floor(p) and ceil(p) (1-based).
//
// Clamp: when alpha * B < 1 the tail holds less than one observation, so the
// minimum is returned; symmetrically (1 - alpha) * B < 1 returns the maximum.
inline double quantile_sorted(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) {
    throw std::invalid_argument("quantile: empty input");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("quantile: alpha must lie in [0, 1]");
  }
  const auto B = static_cast<double>(sorted.size());
  if (alpha * B < 1.0) {
    return sorted.front();
  }
  if ((1.0 - alpha) * B < 1.0) {
    return sorted.back();
  }
  const double pos = alpha * (B - 1.0); // 0-based
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) {
    return sorted[lo];
  }
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace shadowboot

#endif // SHADOWBOOT_QUANTILE_HPP_
