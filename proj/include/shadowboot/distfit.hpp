#ifndef SHADOWBOOT_DISTFIT_HPP_
#define SHADOWBOOT_DISTFIT_HPP_

#include "shadowboot/quantile.hpp"
#include "shadowboot/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace shadowboot {

struct DensityCurve {
  std::vector<double> grid;    // ascending
  std::vector<double> density; // same length, >= 0
};

inline double trapezoid_integral(const DensityCurve &c) {
  double s = 0.0;
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    s += 0.5 * (c.density[i] + c.density[i - 1]) * (c.grid[i] - c.grid[i - 1]);
  }
  return s;
}

struct Histogram {
  std::vector<double> edges; // bin_count + 1
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max], half-open except the last, which is
/// closed. Constant data gets a unit-width range centred on the value.
inline Histogram histogram(std::span<const double> values, std::size_t bin_count) {
  if (values.empty()) {
    throw std::invalid_argument("histogram: empty input");
  }
  if (bin_count == 0) {
    throw std::invalid_argument("histogram: bin_count must be >= 1");
  }
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("histogram: non-finite values");
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);
  Histogram h;
  h.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    h.edges[i] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    auto bin = static_cast<std::size_t>(std::floor((v - lo) / width));
    h.counts[std::min(bin, bin_count - 1)]++;
  }
  return h;
}

/// Silverman's rule, robust variant: 0.9 min(s, IQR / 1.34) n^(-1/5). Falls
/// back to s when the IQR is zero.
inline double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("silverman_bandwidth: need at least 2 values");
  }
  const auto sorted = sorted_copy(values);
  const auto n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) {
    mean += v;
  }
  mean /= n;
  double ss = 0.0;
  for (double v : sorted) {
    ss += (v - mean) * (v - mean);
  }
  const double s = std::sqrt(ss / (n - 1.0));
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(s, iqr / 1.34) : s;
  return 0.9 * spread * std::pow(n, -0.2);
}

/// Gaussian-kernel density estimate at x with bandwidth h.
inline double kde_at(std::span<const double> values, double h, double x) {
  double s = 0.0;
  for (double v : values) {
    s += normal_pdf((x - v) / h);
  }
  return s / (static_cast<double>(values.size()) * h);
}

/// KDE on an even grid spanning [min - 3h, max + 3h].
inline DensityCurve kde_curve(std::span<const double> values, std::size_t grid_size) {
  if (grid_size < 2) {
    throw std::invalid_argument("kde_curve: grid_size must be >= 2");
  }
  if (values.size() < 2) {
    throw std::invalid_argument("kde_curve: need at least 2 values");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  if (*lo_it == *hi_it) {
    throw std::invalid_argument("kde_curve: all values identical (bandwidth 0)");
  }
  const double h = silverman_bandwidth(values);
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  DensityCurve c;
  c.grid.resize(grid_size);
  c.density.resize(grid_size);
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    // Fill from both ends so a symmetric range gives mirrored grid points.
    c.grid[i] = i < grid_size / 2 ? lo + step * static_cast<double>(i)
                                  : hi - step * static_cast<double>(grid_size - 1 - i);
    c.density[i] = kde_at(values, h, c.grid[i]);
  }
  return c;
}

/// Normal pdf on an even grid over mu +- 5 sigma.
inline DensityCurve gaussian_pdf_curve(const GaussianApprox &g, std::size_t grid_size) {
  g.validate();
  if (!(g.sigma > 0.0)) {
    throw std::invalid_argument("gaussian_pdf_curve: sigma must be positive");
  }
  if (grid_size < 2) {
    throw std::invalid_argument("gaussian_pdf_curve: grid_size must be >= 2");
  }
  DensityCurve c;
  c.grid.resize(grid_size);
  c.density.resize(grid_size);
  const double lo = g.mu - 5.0 * g.sigma;
  const double step = 10.0 * g.sigma / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    c.grid[i] = lo + step * static_cast<double>(i);
    c.density[i] = normal_pdf((c.grid[i] - g.mu) / g.sigma) / g.sigma;
  }
  return c;
}

} // namespace shadowboot

#endif // SHADOWBOOT_DISTFIT_HPP_
