#ifndef SHADOWBOOT_RISK_HPP_
#define SHADOWBOOT_RISK_HPP_

#include "shadowboot/matrix.hpp"
#include "shadowboot/pauli.hpp"
#include "shadowboot/quantile.hpp"
#include "shadowboot/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Left-tail risk measures on raw estimate values: low estimates are the bad
// outcomes, so EV@R and ES are lower quantiles and lower-tail means.

namespace shadowboot {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Inverse standard normal CDF. Acklam's rational approximation (relative
/// error ~1e-9) followed by one Halley step against erfc.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct GaussianApprox {
  double mu = 0.0;
  double sigma = 0.0;

  void validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
      throw std::invalid_argument("GaussianApprox: need finite mu and sigma >= 0");
    }
  }
};

namespace detail {
inline void check_level(double alpha, const char *who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": alpha must lie in (0, 1)");
  }
}
} // namespace detail

/// EV@R: the alpha-quantile (linear interpolation, extreme-tail clamp).
inline double empirical_quantile(std::span<const double> values, double alpha) {
  detail::check_level(alpha, "empirical_quantile");
  if (values.empty()) {
    throw std::invalid_argument("empirical_quantile: empty input");
  }
  return quantile_sorted(sorted_copy(values), alpha);
}

/// Mean of all values at or below the alpha-quantile, accumulated as offsets
/// from the quantile so constant input returns that constant exactly.
inline double empirical_es(std::span<const double> values, double alpha) {
  detail::check_level(alpha, "empirical_es");
  if (values.empty()) {
    throw std::invalid_argument("empirical_es: empty input");
  }
  const auto sorted = sorted_copy(values);
  const double q = quantile_sorted(sorted, alpha);
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : sorted) {
    if (v > q) {
      break;
    }
    sum += v - q;
    ++count;
  }
  return count == 0 ? q : q + sum / static_cast<double>(count);
}

inline double gaussian_quantile(const GaussianApprox &g, double alpha) {
  g.validate();
  detail::check_level(alpha, "gaussian_quantile");
  if (g.sigma == 0.0) {
    return g.mu;
  }
  return g.mu + g.sigma * normal_quantile(alpha);
}

/// E[X | X <= q_alpha] = mu - sigma phi(z_alpha) / alpha.
inline double gaussian_es(const GaussianApprox &g, double alpha) {
  g.validate();
  detail::check_level(alpha, "gaussian_es");
  if (g.sigma == 0.0) {
    return g.mu;
  }
  return g.mu - g.sigma * normal_pdf(normal_quantile(alpha)) / alpha;
}

enum class GaussianScaling { Total, PerGroupMedian };

inline const char *scaling_name(GaussianScaling s) {
  return s == GaussianScaling::Total ? "total" : "per_group_median";
}

inline GaussianScaling parse_scaling(const std::string &s) {
  if (s == "total") {
    return GaussianScaling::Total;
  }
  if (s == "per_group_median") {
    return GaussianScaling::PerGroupMedian;
  }
  throw std::invalid_argument("gaussian_scaling must be 'total' or "
                              "'per_group_median', got '" + s + "'");
}

/// Gaussian approximation of an estimator's sampling distribution.
///
/// The single-shot variance 3^k - o^2 is evaluated at `o_estimate` (clamped
/// to [-1, 1]) in place of the unknown true value. `Total` divides by N;
/// `PerGroupMedian` divides by the group size floor(N/K) and applies the
/// asymptotic median-of-K factor pi / (2K).
inline GaussianApprox gaussian_approx(const PauliObservable &obs, double mu,
                                      double o_estimate, std::size_t N,
                                      std::size_t K, GaussianScaling scaling) {
  if (N == 0 || K == 0 || K > N) {
    throw std::invalid_argument("gaussian_approx: need 1 <= K <= N");
  }
  const double var = single_shot_variance(obs, std::clamp(o_estimate, -1.0, 1.0));
  double sigma2 = 0.0;
  switch (scaling) {
  case GaussianScaling::Total:
    sigma2 = var / static_cast<double>(N);
    break;
  case GaussianScaling::PerGroupMedian:
    sigma2 = std::numbers::pi / (2.0 * static_cast<double>(K)) * var /
             static_cast<double>(N / K);
    break;
  }
  return {mu, std::sqrt(sigma2)};
}

struct RiskRow {
  std::string label;
  double alpha;
  double bootstrap_evar;
  double bootstrap_es;
  double gaussian_evar;
  double gaussian_es;
};

/// Cross-observable mean and standard deviation (n - 1 denominator) of
/// |bootstrap - Gaussian| for one measure at one level.
struct RiskSummaryRow {
  std::string measure; // "EVaR" or "ES"
  double alpha;
  double mean_abs_diff;
  double std_abs_diff;
  bool std_defined; // false with a single observable; std is then 0
};

struct RiskReport {
  std::vector<RiskRow> rows; // observable-major, alphas in the given order
  std::vector<RiskSummaryRow> summary;
};

inline RiskReport risk_comparison(const LabeledMatrix &replicates,
                                  std::span<const GaussianApprox> gaussians,
                                  std::span<const double> alphas) {
  const std::size_t M = replicates.cols();
  if (gaussians.size() != M) {
    throw std::invalid_argument("risk_comparison: " + std::to_string(M) +
                                " observables but " +
                                std::to_string(gaussians.size()) +
                                " Gaussian approximations");
  }
  if (M == 0 || replicates.rows() == 0) {
    throw std::invalid_argument("risk_comparison: empty replicate set");
  }
  if (alphas.empty()) {
    throw std::invalid_argument("risk_comparison: no alpha levels");
  }

  RiskReport report;
  for (std::size_t j = 0; j < M; ++j) {
    const auto col = replicates.column(j);
    for (double alpha : alphas) {
      report.rows.push_back({replicates.labels()[j], alpha,
                             empirical_quantile(col, alpha),
                             empirical_es(col, alpha),
                             gaussian_quantile(gaussians[j], alpha),
                             gaussian_es(gaussians[j], alpha)});
    }
  }

  auto summarize = [&](const char *measure, std::size_t a, bool evar) {
    std::vector<double> diffs;
    for (std::size_t j = 0; j < M; ++j) {
      const RiskRow &r = report.rows[j * alphas.size() + a];
      diffs.push_back(evar ? std::abs(r.bootstrap_evar - r.gaussian_evar)
                           : std::abs(r.bootstrap_es - r.gaussian_es));
    }
    double mean = 0.0;
    for (double d : diffs) {
      mean += d;
    }
    mean /= static_cast<double>(M);
    double sd = 0.0;
    if (M >= 2) {
      for (double d : diffs) {
        sd += (d - mean) * (d - mean);
      }
      sd = std::sqrt(sd / static_cast<double>(M - 1));
    }
    report.summary.push_back({measure, alphas[a], mean, sd, M >= 2});
  };
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    summarize("EVaR", a, true);
    summarize("ES", a, false);
  }
  return report;
}

} // namespace shadowboot

#endif // SHADOWBOOT_RISK_HPP_
