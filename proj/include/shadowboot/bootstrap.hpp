#ifndef SHADOWBOOT_BOOTSTRAP_HPP_
#define SHADOWBOOT_BOOTSTRAP_HPP_

#include "shadowboot/estimate.hpp"
#include "shadowboot/matrix.hpp"
#include "shadowboot/parallel.hpp"
#include "shadowboot/quantile.hpp"
#include "shadowboot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace shadowboot {

struct BootstrapConfig {
  std::size_t B = 1000;
  std::size_t K = 10;
  std::uint64_t seed = 0;
};

/// Bootstrap distributions of the mean and median-of-means estimators, one
/// row per replicate and one column per observable, plus the same statistics
/// on the original sample.
struct ReplicateSet {
  LabeledMatrix mean_replicates;
  LabeledMatrix mom_replicates;
  std::vector<double> point_mean;
  std::vector<double> point_mom;

  std::size_t B() const { return mean_replicates.rows(); }
  std::size_t M() const { return mean_replicates.cols(); }
  const std::vector<std::string> &labels() const {
    return mean_replicates.labels();
  }
};

/// N indices drawn uniformly with replacement from [0, N).
inline std::vector<std::size_t> resample_indices(std::size_t N, Engine &rng) {
  if (N == 0) {
    throw std::invalid_argument("resample_indices: N must be >= 1");
  }
  std::vector<std::size_t> idx(N);
  for (auto &i : idx) {
    i = static_cast<std::size_t>(uniform_below(rng, N));
  }
  return idx;
}

/// Point mean and MoM of every column of `em`.
inline std::pair<std::vector<double>, std::vector<double>>
point_statistics(const LabeledMatrix &em, std::size_t K) {
  std::vector<double> mean(em.cols());
  std::vector<double> mom(em.cols());
  for (std::size_t j = 0; j < em.cols(); ++j) {
    const auto col = em.column(j);
    mean[j] = mean_estimate(col);
    mom[j] = median_of_means(col, K);
  }
  return {std::move(mean), std::move(mom)};
}

/// Builds B replicates with indices supplied by `indices_for(b)`. Each
/// replicate gathers whole rows, so all columns see the same resample.
/// Results are bit-identical to mean_estimate / median_of_means on the
/// gathered columns.
inline ReplicateSet replicates_from_indices(
    const LabeledMatrix &em, std::size_t K, std::size_t B,
    const std::function<std::vector<std::size_t>(std::size_t)> &indices_for,
    std::size_t threads = 1) {
  const std::size_t N = em.rows();
  const std::size_t M = em.cols();
  if (N == 0 || M == 0) {
    throw std::invalid_argument("bootstrap: empty estimate matrix");
  }
  if (B == 0) {
    throw std::invalid_argument("bootstrap: B must be >= 1");
  }
  const MoMConfig mom = MoMConfig::for_sample(N, K);

  ReplicateSet rs;
  rs.mean_replicates = LabeledMatrix(B, em.labels());
  rs.mom_replicates = LabeledMatrix(B, em.labels());
  std::tie(rs.point_mean, rs.point_mom) = point_statistics(em, K);

  parallel_for(B, threads, [&](std::size_t b) {
    const std::vector<std::size_t> idx = indices_for(b);
    if (idx.size() != N) {
      throw std::invalid_argument("bootstrap: resample has wrong size");
    }
    std::vector<double> total(M, 0.0);
    std::vector<double> group(K * M, 0.0); // group-major
    for (std::size_t pos = 0; pos < N; ++pos) {
      const auto row = em.row(idx[pos]);
      for (std::size_t j = 0; j < M; ++j) {
        total[j] += row[j];
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      double *g = &group[k * M];
      for (std::size_t pos = k * mom.group_size;
           pos < (k + 1) * mom.group_size; ++pos) {
        const auto row = em.row(idx[pos]);
        for (std::size_t j = 0; j < M; ++j) {
          g[j] += row[j];
        }
      }
    }
    std::vector<double> means(K);
    for (std::size_t j = 0; j < M; ++j) {
      rs.mean_replicates(b, j) = total[j] / static_cast<double>(N);
      if (K == 1) {
        rs.mom_replicates(b, j) = rs.mean_replicates(b, j);
        continue;
      }
      for (std::size_t k = 0; k < K; ++k) {
        means[k] = group[k * M + j] / static_cast<double>(mom.group_size);
      }
      rs.mom_replicates(b, j) = median_inplace(means);
    }
  });
  return rs;
}

/// Nonparametric i.i.d. bootstrap of the mean and MoM estimators. Replicate b
/// draws from substream (cfg.seed, b), so output is independent of `threads`.
inline ReplicateSet bootstrap_replicates(const LabeledMatrix &em,
                                         const BootstrapConfig &cfg,
                                         std::size_t threads = 1) {
  if (cfg.K == 0) {
    throw std::invalid_argument("bootstrap: K must be >= 1");
  }
  const std::size_t N = em.rows();
  return replicates_from_indices(
      em, cfg.K, cfg.B,
      [&](std::size_t b) {
        Engine rng = substream(cfg.seed, b);
        return resample_indices(N, rng);
      },
      threads);
}

/// Standard deviation of the replicates with a B - 1 denominator.
inline double bootstrap_se(std::span<const double> replicates) {
  if (replicates.size() < 2) {
    throw std::invalid_argument("bootstrap_se: need at least 2 replicates");
  }
  const double mean = mean_estimate(replicates);
  double ss = 0.0;
  for (double t : replicates) {
    ss += (t - mean) * (t - mean);
  }
  return std::sqrt(ss / static_cast<double>(replicates.size() - 1));
}

/// Replicate mean minus the point statistic.
inline double bootstrap_bias(std::span<const double> replicates, double point) {
  return mean_estimate(replicates) - point;
}

/// Percentile interval (q_{(1-c)/2}, q_{(1+c)/2}) under the shared
/// linear-interpolation quantile convention.
inline std::pair<double, double>
percentile_interval(std::span<const double> replicates, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("percentile_interval: coverage must lie in (0, 1)");
  }
  if (replicates.size() < 2) {
    throw std::invalid_argument("percentile_interval: need at least 2 replicates");
  }
  const auto sorted = sorted_copy(replicates);
  return {quantile_sorted(sorted, 0.5 * (1.0 - coverage)),
          quantile_sorted(sorted, 0.5 * (1.0 + coverage))};
}

/// sup_x |EDF(x) - F(x)| for a continuous reference F, checked on both sides
/// of every sample point.
template <typename Cdf>
double ks_statistic(std::span<const double> sample, Cdf &&reference_cdf) {
  if (sample.empty()) {
    throw std::invalid_argument("ks_statistic: empty sample");
  }
  const auto sorted = sorted_copy(sample);
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(sorted[i]);
    const auto rank = static_cast<double>(i);
    d = std::max({d, (rank + 1.0) / n - f, f - rank / n});
  }
  return d;
}

/// Two-sample KS distance sup_x |F_a(x) - F_b(x)| between empirical CDFs.
/// Ties are handled by stepping over every copy of a value before comparing.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const auto na = static_cast<double>(sa.size());
  const auto nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] == x) {
      ++i;
    }
    while (j < sb.size() && sb[j] == x) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

} // namespace shadowboot

#endif // SHADOWBOOT_BOOTSTRAP_HPP_
