#ifndef SHADOWBOOT_QSIM_HPP_
#define SHADOWBOOT_QSIM_HPP_

#include "shadowboot/pauli.hpp"
#include "shadowboot/rng.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shadowboot {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr std::size_t kMaxQubits = 26;

/// Pure n-qubit state. Basis index bit q holds the value of qubit q.
/// Always normalized; every constructor checks.
class StateVector {
public:
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ > kMaxQubits) {
      throw std::invalid_argument("StateVector: too many qubits (" +
                                  std::to_string(n_qubits_) + ")");
    }
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
      throw std::invalid_argument("StateVector: expected 2^" +
                                  std::to_string(n_qubits_) +
                                  " amplitudes, got " +
                                  std::to_string(amplitudes_.size()));
    }
    const double norm = squared_norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
      throw std::invalid_argument("StateVector: not normalized (norm^2 = " +
                                  std::to_string(norm) + ")");
    }
  }

  /// |0...0>
  static StateVector zero(std::size_t n_qubits) {
    if (n_qubits > kMaxQubits) {
      throw std::invalid_argument("StateVector: too many qubits");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    amps[0] = 1.0;
    return StateVector(n_qubits, std::move(amps));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

  double squared_norm() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) {
      s += std::norm(a);
    }
    return s;
  }

private:
  friend class StateMutator;

  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

enum class GateKind { H, RY, RZ, CNOT, S, Sdg, X, Y, Z };

inline const char *gate_name(GateKind k) {
  switch (k) {
  case GateKind::H:
    return "H";
  case GateKind::RY:
    return "RY";
  case GateKind::RZ:
    return "RZ";
  case GateKind::CNOT:
    return "CNOT";
  case GateKind::S:
    return "S";
  case GateKind::Sdg:
    return "Sdg";
  case GateKind::X:
    return "X";
  case GateKind::Y:
    return "Y";
  case GateKind::Z:
    return "Z";
  }
  return "?";
}

/// For CNOT, targets = {control, target}.
struct Gate {
  GateKind kind;
  double angle = 0.0;
  std::vector<std::size_t> targets;

  static Gate single(GateKind kind, std::size_t q, double angle = 0.0) {
    return Gate{kind, angle, {q}};
  }
  static Gate cnot(std::size_t control, std::size_t target) {
    return Gate{GateKind::CNOT, 0.0, {control, target}};
  }

  void validate(std::size_t n_qubits) const {
    const std::size_t arity = kind == GateKind::CNOT ? 2 : 1;
    if (targets.size() != arity) {
      throw std::invalid_argument(std::string(gate_name(kind)) + ": expected " +
                                  std::to_string(arity) + " target(s)");
    }
    for (auto q : targets) {
      if (q >= n_qubits) {
        throw std::out_of_range(std::string(gate_name(kind)) + ": qubit " +
                                std::to_string(q) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
      }
    }
    if (arity == 2 && targets[0] == targets[1]) {
      throw std::invalid_argument("CNOT: control equals target");
    }
    if (!std::isfinite(angle)) {
      throw std::invalid_argument(std::string(gate_name(kind)) +
                                  ": non-finite angle");
    }
  }

  friend bool operator==(const Gate &, const Gate &) = default;
};

// Sole writer of StateVector amplitudes. Unitary updates only.
class StateMutator {
public:
  explicit StateMutator(StateVector &s) : amps_(s.amplitudes_) {}

  // Applies the 2x2 matrix [[m00, m01], [m10, m11]] to qubit q.
  void apply_1q(std::size_t q, Complex m00, Complex m01, Complex m10,
                Complex m11) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i + stride];
        amps_[i] = m00 * a0 + m01 * a1;
        amps_[i + stride] = m10 * a0 + m11 * a1;
      }
    }
  }

  void apply_hadamard(std::size_t q) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i + stride];
        amps_[i] = r * (a0 + a1);
        amps_[i + stride] = r * (a0 - a1);
      }
    }
  }

  // Multiplies amplitudes with qubit q = 1 by `phase`.
  void apply_phase(std::size_t q, Complex phase) {
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) {
        amps_[i] *= phase;
      }
    }
  }

  void apply_cnot(std::size_t control, std::size_t target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & cmask) && !(i & tmask)) {
        std::swap(amps_[i], amps_[i | tmask]);
      }
    }
  }

private:
  std::vector<Complex> &amps_;
};

inline void apply_gate_inplace(StateVector &state, const Gate &gate) {
  gate.validate(state.n_qubits());
  StateMutator m(state);
  const std::size_t q = gate.targets[0];
  const Complex i1(0.0, 1.0);
  switch (gate.kind) {
  case GateKind::H:
    m.apply_hadamard(q);
    break;
  case GateKind::RY: {
    const double c = std::cos(gate.angle / 2);
    const double s = std::sin(gate.angle / 2);
    m.apply_1q(q, c, -s, s, c);
    break;
  }
  case GateKind::RZ: {
    const Complex lo = std::polar(1.0, -gate.angle / 2);
    const Complex hi = std::polar(1.0, gate.angle / 2);
    m.apply_1q(q, lo, 0.0, 0.0, hi);
    break;
  }
  case GateKind::CNOT:
    m.apply_cnot(gate.targets[0], gate.targets[1]);
    break;
  case GateKind::S:
    m.apply_phase(q, i1);
    break;
  case GateKind::Sdg:
    m.apply_phase(q, -i1);
    break;
  case GateKind::X:
    m.apply_1q(q, 0.0, 1.0, 1.0, 0.0);
    break;
  case GateKind::Y:
    m.apply_1q(q, 0.0, -i1, i1, 0.0);
    break;
  case GateKind::Z:
    m.apply_phase(q, -1.0);
    break;
  }
}

inline StateVector apply_gate(StateVector state, const Gate &gate) {
  apply_gate_inplace(state, gate);
  return state;
}

struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<double> theta;

  void validate() const {
    for (const auto &g : gates) {
      g.validate(n_qubits);
    }
  }
};

/// H on every qubit, RY(theta[q]) on every qubit, a CNOT chain (q, q+1),
/// then RZ(theta[n + q]) on every qubit.
inline Circuit build_ansatz_circuit(std::size_t n, std::span<const double> theta) {
  if (n == 0) {
    throw std::invalid_argument("build_ansatz_circuit: n must be >= 1");
  }
  if (theta.size() != 2 * n) {
    throw std::invalid_argument("build_ansatz_circuit: expected " +
                                std::to_string(2 * n) + " angles, got " +
                                std::to_string(theta.size()));
  }
  Circuit c;
  c.n_qubits = n;
  c.theta.assign(theta.begin(), theta.end());
  for (std::size_t q = 0; q < n; ++q) {
    c.gates.push_back(Gate::single(GateKind::H, q));
  }
  for (std::size_t q = 0; q < n; ++q) {
    c.gates.push_back(Gate::single(GateKind::RY, q, theta[q]));
  }
  for (std::size_t q = 0; q + 1 < n; ++q) {
    c.gates.push_back(Gate::cnot(q, q + 1));
  }
  for (std::size_t q = 0; q < n; ++q) {
    c.gates.push_back(Gate::single(GateKind::RZ, q, theta[n + q]));
  }
  c.validate();
  return c;
}

/// 2n angles, uniform on [0, 2*pi).
inline std::vector<double> draw_theta(std::size_t n, std::uint64_t seed) {
  Engine rng = substream(seed, 0);
  std::vector<double> theta(2 * n);
  for (auto &t : theta) {
    t = 2.0 * std::numbers::pi * uniform01(rng);
  }
  return theta;
}

inline StateVector run_circuit(const Circuit &circuit) {
  circuit.validate();
  StateVector state = StateVector::zero(circuit.n_qubits);
  for (const auto &g : circuit.gates) {
    apply_gate_inplace(state, g);
  }
  return state;
}

/// <psi|P|psi> for a Pauli string P.
inline double exact_expectation(const StateVector &state,
                                const PauliObservable &obs) {
  if (obs.min_qubits() > state.n_qubits()) {
    throw std::out_of_range("exact_expectation: observable " + obs.label() +
                            " acts outside " +
                            std::to_string(state.n_qubits()) + " qubits");
  }
  std::size_t flip = 0;
  std::size_t ymask = 0;
  std::size_t zmask = 0;
  for (const auto &t : obs.terms()) {
    const std::size_t bit = std::size_t{1} << t.qubit;
    if (t.axis != Axis::Z) {
      flip |= bit;
    }
    if (t.axis == Axis::Y) {
      ymask |= bit;
    }
    if (t.axis == Axis::Z) {
      zmask |= bit;
    }
  }
  // P|i> = phase(i) |i ^ flip>, with Y|0> = i|1>, Y|1> = -i|0>, Z|b> = (-1)^b|b>.
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto amps = state.amplitudes();
  Complex acc = 0.0;
  const int ny = std::popcount(ymask);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const int ones_y = std::popcount(i & ymask);
    const int ones_z = std::popcount(i & zmask);
    // i^(ny) * (-1)^(ones_y) * (-1)^(ones_z)
    const int power = (ny + 2 * ones_y + 2 * ones_z) & 3;
    acc += std::conj(amps[i ^ flip]) * kIPow[power] * amps[i];
  }
  return acc.real();
}

/// Rotates every qubit into its measurement basis: X -> H, Y -> S^dagger then
/// H, Z -> nothing. Computational outcome 0 then corresponds to eigenvalue +1.
inline void rotate_to_bases(StateVector &state, std::span<const Axis> bases) {
  if (bases.size() != state.n_qubits()) {
    throw std::invalid_argument("rotate_to_bases: expected " +
                                std::to_string(state.n_qubits()) +
                                " bases, got " + std::to_string(bases.size()));
  }
  StateMutator m(state);
  for (std::size_t q = 0; q < bases.size(); ++q) {
    switch (bases[q]) {
    case Axis::X:
      m.apply_hadamard(q);
      break;
    case Axis::Y:
      m.apply_phase(q, Complex(0.0, -1.0));
      m.apply_hadamard(q);
      break;
    case Axis::Z:
      break;
    }
  }
}

inline std::vector<double> measurement_probabilities(StateVector state,
                                                     std::span<const Axis> bases) {
  rotate_to_bases(state, bases);
  std::vector<double> probs(state.dimension());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::norm(state[i]);
  }
  return probs;
}

} // namespace shadowboot

#endif // SHADOWBOOT_QSIM_HPP_
