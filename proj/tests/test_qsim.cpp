#include "oracles.hpp"

#include "shadowboot/qsim.hpp"
#include "shadowboot/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace shadowboot;

namespace {

StateVector random_state(std::size_t n, std::uint64_t seed) {
  Engine rng = substream(seed, 99);
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto &a : amps) {
    a = Complex(g(rng), g(rng));
    norm += std::norm(a);
  }
  for (auto &a : amps) {
    a /= std::sqrt(norm);
  }
  return StateVector(n, std::move(amps));
}

std::vector<Complex> to_vec(const StateVector &s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

} // namespace

TEST(Pauli, ParseAndLabel) {
  const auto o = PauliObservable::parse("Z3X0");
  EXPECT_EQ(o.label(), "X0Z3");
  EXPECT_EQ(o.weight(), 2u);
  EXPECT_EQ(o.min_qubits(), 4u);
  EXPECT_EQ(PauliObservable::parse("").weight(), 0u);
  EXPECT_THROW(PauliObservable::parse("X0X0"), std::invalid_argument);
  EXPECT_THROW(PauliObservable::parse("Q1"), std::invalid_argument);
  EXPECT_THROW(PauliObservable::parse("X"), std::invalid_argument);
}

TEST(Pauli, AdjacentSetOrderAndSize) {
  const auto obs = adjacent_xyz(10);
  ASSERT_EQ(obs.size(), 27u);
  EXPECT_EQ(obs.front().label(), "X0X1");
  EXPECT_EQ(obs[9].label(), "Y0Y1");
  EXPECT_EQ(obs.back().label(), "Z8Z9");
}

TEST(Qsim, HadamardOnZero) {
  auto s = apply_gate(StateVector::zero(1), Gate::single(GateKind::H, 0));
  const double r = 1.0 / std::numbers::sqrt2;
  EXPECT_NEAR(s.amplitudes()[0].real(), r, 1e-15);
  EXPECT_NEAR(s.amplitudes()[1].real(), r, 1e-15);
}

TEST(Qsim, PlusPlusHasUnitXX) {
  Circuit c{2, {Gate::single(GateKind::H, 0), Gate::single(GateKind::H, 1)}, {}};
  const auto s = run_circuit(c);
  EXPECT_NEAR(exact_expectation(s, PauliObservable::parse("X0X1")), 1.0, 1e-12);
  EXPECT_NEAR(exact_expectation(s, PauliObservable::parse("Z0Z1")), 0.0, 1e-12);
}

TEST(Qsim, CnotIsPermutation) {
  // |q1 q0> = |01> (index 1) -> |11> (index 3)
  auto s = apply_gate(StateVector::zero(2), Gate::single(GateKind::X, 0));
  s = apply_gate(s, Gate::cnot(0, 1));
  EXPECT_NEAR(std::abs(s.amplitudes()[3]), 1.0, 1e-15);
}

TEST(Qsim, RotationsAndPhases) {
  const double t = 0.7;
  auto s = apply_gate(StateVector::zero(1), Gate::single(GateKind::RY, 0, t));
  EXPECT_NEAR(s.amplitudes()[0].real(), std::cos(t / 2), 1e-15);
  EXPECT_NEAR(s.amplitudes()[1].real(), std::sin(t / 2), 1e-15);
  EXPECT_NEAR(exact_expectation(s, PauliObservable::parse("X0")), std::sin(t), 1e-12);

  s = apply_gate(s, Gate::single(GateKind::RZ, 0, 0.4));
  EXPECT_NEAR(exact_expectation(s, PauliObservable::parse("Y0")),
              std::sin(t) * std::sin(0.4), 1e-12);

  auto plus = apply_gate(StateVector::zero(1), Gate::single(GateKind::H, 0));
  auto ys = apply_gate(plus, Gate::single(GateKind::S, 0));
  EXPECT_NEAR(exact_expectation(ys, PauliObservable::parse("Y0")), 1.0, 1e-12);
  auto back = apply_gate(ys, Gate::single(GateKind::Sdg, 0));
  EXPECT_NEAR(exact_expectation(back, PauliObservable::parse("X0")), 1.0, 1e-12);
}

TEST(Qsim, AnsatzGateOrderAndCount) {
  const std::size_t n = 5;
  const auto theta = draw_theta(n, 3);
  const Circuit c = build_ansatz_circuit(n, theta);
  ASSERT_EQ(c.gates.size(), 4 * n - 1);
  for (std::size_t q = 0; q < n; ++q) {
    EXPECT_EQ(c.gates[q].kind, GateKind::H);
    EXPECT_EQ(c.gates[n + q].kind, GateKind::RY);
    EXPECT_DOUBLE_EQ(c.gates[n + q].angle, theta[q]);
    EXPECT_EQ(c.gates[3 * n - 1 + q].kind, GateKind::RZ);
    EXPECT_DOUBLE_EQ(c.gates[3 * n - 1 + q].angle, theta[n + q]);
  }
  for (std::size_t q = 0; q + 1 < n; ++q) {
    const Gate &g = c.gates[2 * n + q];
    EXPECT_EQ(g.kind, GateKind::CNOT);
    EXPECT_EQ(g.targets[0], q);
    EXPECT_EQ(g.targets[1], q + 1);
  }
}

TEST(Qsim, AnsatzWithZeroAnglesIsUniform) {
  const std::size_t n = 10;
  std::vector<double> zeros(2 * n, 0.0);
  Circuit c = build_ansatz_circuit(n, zeros);
  const auto s = run_circuit(c);
  // H layer alone gives |+>^n; CNOTs permute basis states of a uniform
  // superposition, so every amplitude stays 2^{-n/2}.
  const double a = std::pow(2.0, -0.5 * n);
  for (const auto &amp : s.amplitudes()) {
    EXPECT_NEAR(amp.real(), a, 1e-12);
    EXPECT_NEAR(amp.imag(), 0.0, 1e-12);
  }
}

TEST(Qsim, ThetaIsDeterministicAndInRange) {
  const auto a = draw_theta(10, 7);
  EXPECT_EQ(a, draw_theta(10, 7));
  EXPECT_NE(a, draw_theta(10, 8));
  for (double t : a) {
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 2 * std::numbers::pi);
  }
}

TEST(Qsim, NormPreservedThroughAnsatz) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = run_circuit(build_ansatz_circuit(8, draw_theta(8, seed)));
    EXPECT_NEAR(s.squared_norm(), 1.0, 1e-12);
  }
}

TEST(Qsim, ExpectationMatchesDenseOracle) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const StateVector s = random_state(n, seed);
      const auto psi = to_vec(s);
      std::size_t total = 1;
      for (std::size_t q = 0; q < n; ++q) {
        total *= 4;
      }
      for (std::size_t code = 1; code < total; ++code) {
        std::string label;
        std::size_t c = code;
        for (std::size_t q = 0; q < n; ++q, c /= 4) {
          if (c % 4) {
            label += "XYZ"[c % 4 - 1];
            label += std::to_string(q);
          }
        }
        const auto obs = PauliObservable::parse(label);
        const double want = oracle::quadratic_form(psi, oracle::dense_pauli(obs, n)).real();
        EXPECT_NEAR(exact_expectation(s, obs), want, 1e-12) << label;
      }
    }
  }
}

TEST(Qsim, MeasurementProbabilitiesInRotatedBasis) {
  const StateVector s = random_state(3, 4);
  const std::vector<Axis> bases = {Axis::X, Axis::Y, Axis::Z};
  const auto probs = measurement_probabilities(s, bases);
  const auto psi = to_vec(s);
  double sum = 0.0;
  for (std::size_t b = 0; b < probs.size(); ++b) {
    std::vector<Complex> v{1.0};
    for (std::size_t q = 0; q < 3; ++q) {
      const auto e = oracle::eigvec(bases[q], static_cast<int>((b >> q) & 1));
      std::vector<Complex> next(v.size() * 2);
      for (std::size_t hi = 0; hi < 2; ++hi) {
        for (std::size_t lo = 0; lo < v.size(); ++lo) {
          next[hi * v.size() + lo] = e[hi] * v[lo];
        }
      }
      v = std::move(next);
    }
    Complex overlap = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      overlap += std::conj(v[i]) * psi[i];
    }
    EXPECT_NEAR(probs[b], std::norm(overlap), 1e-12);
    sum += probs[b];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Qsim, ErrorPaths) {
  EXPECT_THROW(StateVector(2, std::vector<Complex>(3, 0.5)), std::invalid_argument);
  EXPECT_THROW(StateVector(1, {Complex(1), Complex(1)}), std::invalid_argument);
  EXPECT_THROW(apply_gate(StateVector::zero(2), Gate::single(GateKind::H, 2)),
               std::out_of_range);
  EXPECT_THROW(apply_gate(StateVector::zero(2), Gate::cnot(1, 1)), std::invalid_argument);
  EXPECT_THROW(build_ansatz_circuit(0, {}), std::invalid_argument);
  std::vector<double> three(3, 0.0);
  EXPECT_THROW(build_ansatz_circuit(2, three), std::invalid_argument);
  EXPECT_THROW(exact_expectation(StateVector::zero(2), PauliObservable::parse("Z2")),
               std::out_of_range);
}

TEST(Qsim, ReferenceExamples) {
  auto s = apply_gate(StateVector::zero(1), Gate::single(GateKind::H, 0));
  EXPECT_EQ(apply_gate(s, Gate::single(GateKind::RY, 0, 0.0)).amplitudes()[1], s.amplitudes()[1]);

  EXPECT_EQ(run_circuit(Circuit{3, {}, {}}).amplitudes()[0], Complex(1.0));

  Circuit bell{2, {Gate::single(GateKind::H, 0), Gate::cnot(0, 1)}, {}};
  const auto b = run_circuit(bell);
  EXPECT_NEAR(exact_expectation(b, PauliObservable::parse("Y0Y1")), -1.0, 1e-12);
  EXPECT_NEAR(exact_expectation(b, PauliObservable::parse("X0X1")), 1.0, 1e-12);
  const std::vector<Axis> zz = {Axis::Z, Axis::Z};
  const auto p = measurement_probabilities(b, zz);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  EXPECT_NEAR(p[3], 0.5, 1e-15);

  const std::vector<Axis> x = {Axis::X};
  EXPECT_NEAR(measurement_probabilities(s, x)[0], 1.0, 1e-15);
  const auto px0 = measurement_probabilities(StateVector::zero(1), x);
  EXPECT_NEAR(px0[0], 0.5, 1e-15);
  EXPECT_NEAR(px0[1], 0.5, 1e-15);

  EXPECT_NEAR(exact_expectation(StateVector::zero(2), PauliObservable::parse("Z0Z1")), 1.0,
              1e-15);

  const std::vector<double> zeros(20, 0.0);
  const auto plus10 = run_circuit(build_ansatz_circuit(10, zeros));
  for (std::size_t i = 0; i + 1 < 10; ++i) {
    const auto q0 = std::to_string(i);
    const auto q1 = std::to_string(i + 1);
    EXPECT_NEAR(exact_expectation(plus10, PauliObservable::parse("X" + q0 + "X" + q1)), 1.0,
                1e-12);
    EXPECT_NEAR(exact_expectation(plus10, PauliObservable::parse("Z" + q0 + "Z" + q1)), 0.0,
                1e-12);
  }

  const std::vector<double> one(2, 0.3);
  EXPECT_EQ(build_ansatz_circuit(1, one).gates.size(), 3u);
}

TEST(Qsim, InvariantsOnRandomCircuits) {
  Engine rng = substream(55, 0);
  const GateKind kinds[] = {GateKind::H, GateKind::RY, GateKind::RZ, GateKind::S,
                            GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 6);
    StateVector s = StateVector::zero(n);
    for (int g = 0; g < 60; ++g) {
      if (n > 1 && uniform_below(rng, 4) == 0) {
        const auto c = uniform_below(rng, n);
        const auto t = (c + 1 + uniform_below(rng, n - 1)) % n;
        apply_gate_inplace(s, Gate::cnot(c, t));
      } else {
        apply_gate_inplace(s, Gate::single(kinds[uniform_below(rng, 8)], uniform_below(rng, n),
                                           6.0 * uniform01(rng)));
      }
      ASSERT_NEAR(s.squared_norm(), 1.0, 1e-10);
    }
    for (const auto &o : adjacent_xyz(std::max<std::size_t>(n, 2))) {
      if (o.min_qubits() <= n) {
        const double e = exact_expectation(s, o);
        EXPECT_LE(std::abs(e), 1.0 + 1e-12);
      }
    }
    std::vector<Axis> bases(n);
    for (auto &b : bases) {
      b = static_cast<Axis>(uniform_below(rng, 3));
    }
    const auto p = measurement_probabilities(s, bases);
    double sum = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}
