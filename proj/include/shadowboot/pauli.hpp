#ifndef SHADOWBOOT_PAULI_HPP_
#define SHADOWBOOT_PAULI_HPP_

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shadowboot {

enum class Axis : unsigned char { X = 0, Y = 1, Z = 2 };

inline char axis_char(Axis a) {
  switch (a) {
  case Axis::X:
    return 'X';
  case Axis::Y:
    return 'Y';
  case Axis::Z:
    return 'Z';
  }
  return '?';
}

inline Axis axis_from_char(char c) {
  switch (c) {
  case 'X':
    return Axis::X;
  case 'Y':
    return Axis::Y;
  case 'Z':
    return Axis::Z;
  default:
    throw std::invalid_argument(std::string("not a Pauli axis: '") + c + "'");
  }
}

struct PauliTerm {
  std::size_t qubit;
  Axis axis;

  friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

/// Tensor product of single-qubit Pauli operators on distinct qubits.
/// Qubits not listed carry the identity. Terms are kept sorted by qubit.
class PauliObservable {
public:
  PauliObservable() = default;

  explicit PauliObservable(std::vector<PauliTerm> terms)
      : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(),
              [](const PauliTerm &a, const PauliTerm &b) {
                return a.qubit < b.qubit;
              });
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      if (terms_[i].qubit == terms_[i - 1].qubit) {
        throw std::invalid_argument("PauliObservable: repeated qubit " +
                                    std::to_string(terms_[i].qubit));
      }
    }
  }

  /// Parses labels of the form "X0X1", "Z3", "Y0Z2X5". The empty string is
  /// the identity.
  static PauliObservable parse(std::string_view label) {
    std::vector<PauliTerm> terms;
    std::size_t pos = 0;
    while (pos < label.size()) {
      const Axis axis = axis_from_char(label[pos++]);
      const std::size_t start = pos;
      while (pos < label.size() &&
             std::isdigit(static_cast<unsigned char>(label[pos]))) {
        ++pos;
      }
      if (start == pos) {
        throw std::invalid_argument("Pauli label missing qubit index: " +
                                    std::string(label));
      }
      terms.push_back(
          {std::stoul(std::string(label.substr(start, pos - start))), axis});
    }
    return PauliObservable(std::move(terms));
  }

  const std::vector<PauliTerm> &terms() const { return terms_; }
  std::size_t weight() const { return terms_.size(); }

  /// One past the largest qubit index, or 0 for the identity.
  std::size_t min_qubits() const {
    return terms_.empty() ? 0 : terms_.back().qubit + 1;
  }

  std::string label() const {
    std::string out;
    for (const auto &t : terms_) {
      out += axis_char(t.axis);
      out += std::to_string(t.qubit);
    }
    return out;
  }

  friend bool operator==(const PauliObservable &,
                         const PauliObservable &) = default;

private:
  std::vector<PauliTerm> terms_;
};

/// XX, YY and ZZ on every adjacent pair (q, q+1): all X pairs first, then Y,
/// then Z. For n = 10 this is the 27-observable set.
inline std::vector<PauliObservable> adjacent_xyz(std::size_t n_qubits) {
  std::vector<PauliObservable> out;
  if (n_qubits < 2) {
    return out;
  }
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
      out.emplace_back(std::vector<PauliTerm>{{q, axis}, {q + 1, axis}});
    }
  }
  return out;
}

inline std::vector<std::string>
observable_labels(const std::vector<PauliObservable> &observables) {
  std::vector<std::string> labels;
  labels.reserve(observables.size());
  for (const auto &o : observables) {
    labels.push_back(o.label());
  }
  return labels;
}

} // namespace shadowboot

#endif // SHADOWBOOT_PAULI_HPP_
