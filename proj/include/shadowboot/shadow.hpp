#ifndef SHADOWBOOT_SHADOW_HPP_
#define SHADOWBOOT_SHADOW_HPP_

#include "shadowboot/matrix.hpp"
#include "shadowboot/parallel.hpp"
#include "shadowboot/pauli.hpp"
#include "shadowboot/qsim.hpp"
#include "shadowboot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowboot {

/// One randomized local-Pauli measurement: the basis chosen for each qubit
/// and the observed bit (0 = eigenvalue +1).
struct Snapshot {
  std::vector<Axis> bases;
  std::vector<std::uint8_t> outcomes;

  std::size_t n_qubits() const { return bases.size(); }

  friend bool operator==(const Snapshot &, const Snapshot &) = default;
};

struct ShadowSet {
  std::size_t n_qubits = 0;
  std::vector<Snapshot> snapshots;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return snapshots.size(); }

  friend bool operator==(const ShadowSet &, const ShadowSet &) = default;
};

/// Samples N snapshots: each qubit's basis uniform on {X, Y, Z}, outcome
/// drawn from the rotated state's Born distribution. Snapshot i uses
/// substream (seed, i), so the result does not depend on `threads`.
inline ShadowSet sample_shadow(const StateVector &state, std::size_t n_snapshots,
                               std::uint64_t seed, std::size_t threads = 1) {
  if (n_snapshots == 0) {
    throw std::invalid_argument("sample_shadow: N must be >= 1");
  }
  const std::size_t n = state.n_qubits();
  ShadowSet out;
  out.n_qubits = n;
  out.seed = seed;
  out.snapshots.resize(n_snapshots);

  parallel_for(n_snapshots, threads, [&](std::size_t i) {
    Engine rng = substream(seed, i);
    Snapshot &snap = out.snapshots[i];
    snap.bases.resize(n);
    for (auto &b : snap.bases) {
      b = static_cast<Axis>(uniform_below(rng, 3));
    }
    StateVector rotated = state;
    rotate_to_bases(rotated, snap.bases);

    const double u = uniform01(rng);
    const auto amps = rotated.amplitudes();
    std::size_t outcome = amps.size() - 1;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
      cumulative += std::norm(amps[k]);
      if (u < cumulative) {
        outcome = k;
        break;
      }
    }
    // Rounding can leave the cumulative sum just under 1; fall back to the
    // last outcome with nonzero probability.
    if (!(u < cumulative)) {
      while (outcome > 0 && std::norm(amps[outcome]) == 0.0) {
        --outcome;
      }
    }
    snap.outcomes.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      snap.outcomes[q] = static_cast<std::uint8_t>((outcome >> q) & 1U);
    }
  });
  return out;
}

/// tr(O rho_hat) for one snapshot: the product over the observable's support
/// of 3 * (+1 or -1) when the measured basis matches, 0 otherwise.
inline double snapshot_estimate(const Snapshot &s, const PauliObservable &obs) {
  if (obs.min_qubits() > s.n_qubits()) {
    throw std::out_of_range("snapshot_estimate: observable " + obs.label() +
                            " acts outside " + std::to_string(s.n_qubits()) +
                            " qubits");
  }
  double value = 1.0;
  for (const auto &t : obs.terms()) {
    if (s.bases[t.qubit] != t.axis) {
      return 0.0;
    }
    value *= s.outcomes[t.qubit] == 0 ? 3.0 : -3.0;
  }
  return value;
}

/// N x M matrix of single-snapshot estimates, one column per observable.
using EstimateMatrix = LabeledMatrix;

inline EstimateMatrix
estimate_matrix(const ShadowSet &shadow,
                std::span<const PauliObservable> observables,
                std::size_t threads = 1) {
  if (shadow.snapshots.empty() || observables.empty()) {
    throw std::invalid_argument("estimate_matrix: empty shadow or observables");
  }
  std::vector<std::string> labels;
  for (const auto &o : observables) {
    if (o.min_qubits() > shadow.n_qubits) {
      throw std::out_of_range("estimate_matrix: observable " + o.label() +
                              " acts outside " +
                              std::to_string(shadow.n_qubits) + " qubits");
    }
    labels.push_back(o.label());
  }
  EstimateMatrix em(shadow.size(), std::move(labels));
  parallel_for(shadow.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < observables.size(); ++j) {
      em(i, j) = snapshot_estimate(shadow.snapshots[i], observables[j]);
    }
  });
  return em;
}

/// Squared shadow norm of the traceless part under local Pauli measurements:
/// 3^k for a weight-k string, 0 for the identity.
inline double pauli_shadow_norm_sq(const PauliObservable &obs) {
  if (obs.weight() == 0) {
    return 0.0;
  }
  return std::pow(3.0, static_cast<double>(obs.weight()));
}

inline double max_shadow_norm_sq(std::span<const PauliObservable> observables) {
  double m = 0.0;
  for (const auto &o : observables) {
    m = std::max(m, pauli_shadow_norm_sq(o));
  }
  return m;
}

/// Variance of one snapshot estimate: 3^k - o^2 (0 for the identity).
inline double single_shot_variance(const PauliObservable &obs, double o_true) {
  if (!(std::abs(o_true) <= 1.0)) {
    throw std::invalid_argument("single_shot_variance: |o| must be <= 1");
  }
  if (obs.weight() == 0) {
    return 0.0;
  }
  return pauli_shadow_norm_sq(obs) - o_true * o_true;
}

namespace detail {
// Ceiling that ignores floating-point noise just above an integer.
inline std::size_t ceil_count(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(r);
  }
  return static_cast<std::size_t>(std::ceil(x));
}
} // namespace detail

struct SampleComplexity {
  std::size_t K;
  std::size_t N;
};

/// Median-of-means parameters for accuracy epsilon on all M observables with
/// probability >= 1 - delta: K = ceil(2 ln(2M/delta)),
/// N = ceil(34 / epsilon^2 * max_i ||O_i,0||^2_shadow).
inline SampleComplexity required_K_N(std::size_t M, double delta, double epsilon,
                                     double max_norm_sq) {
  if (M == 0) {
    throw std::invalid_argument("required_K_N: M must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("required_K_N: delta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("required_K_N: epsilon must be positive");
  }
  if (!(max_norm_sq >= 0.0)) {
    throw std::invalid_argument("required_K_N: negative shadow norm");
  }
  const double k = 2.0 * std::log(2.0 * static_cast<double>(M) / delta);
  const double n = 34.0 / (epsilon * epsilon) * max_norm_sq;
  return {std::max<std::size_t>(1, detail::ceil_count(k)),
          std::max<std::size_t>(1, detail::ceil_count(n))};
}

inline SampleComplexity
required_K_N(std::size_t M, double delta, double epsilon,
             std::span<const PauliObservable> observables) {
  return required_K_N(M, delta, epsilon, max_shadow_norm_sq(observables));
}

/// Accuracy guaranteed by N total snapshots: sqrt(34 * max norm^2 / N).
inline double epsilon_bound(std::size_t N, double max_norm_sq) {
  if (N == 0) {
    throw std::invalid_argument("epsilon_bound: N must be >= 1");
  }
  return std::sqrt(34.0 * max_norm_sq / static_cast<double>(N));
}

inline double epsilon_bound(std::size_t N,
                            std::span<const PauliObservable> observables) {
  return epsilon_bound(N, max_shadow_norm_sq(observables));
}

/// Failure probability implied by K groups for M observables (K solved for
/// delta): 2M exp(-K/2).
inline double implied_delta(std::size_t M, std::size_t K) {
  return 2.0 * static_cast<double>(M) * std::exp(-0.5 * static_cast<double>(K));
}

/// Dense complex square matrix, row-major.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<Complex> data;

  Complex &operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return data[r * dim + c];
  }

  static DenseMatrix identity(std::size_t dim) {
    DenseMatrix m{dim, std::vector<Complex>(dim * dim)};
    for (std::size_t i = 0; i < dim; ++i) {
      m(i, i) = 1.0;
    }
    return m;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      t += (*this)(i, i);
    }
    return t;
  }
};

/// a (x) b
inline DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
  DenseMatrix out{a.dim * b.dim,
                  std::vector<Complex>(a.dim * b.dim * a.dim * b.dim)};
  for (std::size_t ar = 0; ar < a.dim; ++ar) {
    for (std::size_t ac = 0; ac < a.dim; ++ac) {
      const Complex av = a(ar, ac);
      for (std::size_t br = 0; br < b.dim; ++br) {
        for (std::size_t bc = 0; bc < b.dim; ++bc) {
          out(ar * b.dim + br, ac * b.dim + bc) = av * b(br, bc);
        }
      }
    }
  }
  return out;
}

inline constexpr std::size_t kMaxOracleQubits = 6;

/// Literal inverse-channel snapshot: the Kronecker product over qubits of
/// 3 u^dagger |b><b| u - I, with qubit 0 as the least significant factor.
/// Test-scale only.
inline DenseMatrix dense_snapshot_oracle(const Snapshot &s) {
  const std::size_t n = s.n_qubits();
  if (n > kMaxOracleQubits) {
    throw std::invalid_argument("dense_snapshot_oracle: n > " +
                                std::to_string(kMaxOracleQubits));
  }
  if (s.outcomes.size() != n) {
    throw std::invalid_argument("dense_snapshot_oracle: malformed snapshot");
  }
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i1(0.0, 1.0);
  DenseMatrix out = DenseMatrix::identity(1);
  for (std::size_t q = 0; q < n; ++q) {
    // Post-rotation eigenvector u^dagger |b> in the computational basis.
    const double sign = s.outcomes[q] == 0 ? 1.0 : -1.0;
    Complex v0 = 1.0;
    Complex v1 = 0.0;
    switch (s.bases[q]) {
    case Axis::Z:
      v0 = s.outcomes[q] == 0 ? 1.0 : 0.0;
      v1 = s.outcomes[q] == 0 ? 0.0 : 1.0;
      break;
    case Axis::X: // H|b>
      v0 = r;
      v1 = sign * r;
      break;
    case Axis::Y: // S H |b>
      v0 = r;
      v1 = sign * r * i1;
      break;
    }
    DenseMatrix f{2, std::vector<Complex>(4)};
    f(0, 0) = 3.0 * v0 * std::conj(v0) - 1.0;
    f(0, 1) = 3.0 * v0 * std::conj(v1);
    f(1, 0) = 3.0 * v1 * std::conj(v0);
    f(1, 1) = 3.0 * v1 * std::conj(v1) - 1.0;
    out = kron(f, out);
  }
  return out;
}

} // namespace shadowboot

#endif // SHADOWBOOT_SHADOW_HPP_
