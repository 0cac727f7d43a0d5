#ifndef SHADOWBOOT_SNAPSHOT_IO_HPP_
#define SHADOWBOOT_SNAPSHOT_IO_HPP_

#include "shadowboot/shadow.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

// Text format, one snapshot per line:
//
//   # n_qubits=10 ensemble=pauli [seed=<u64>]
//   XZYZXXZYZX 0110010011
//
// Character q of each field belongs to qubit q. Blank lines are ignored.

namespace shadowboot {

class SnapshotFormatError : public std::runtime_error {
public:
  SnapshotFormatError(std::size_t line, const std::string &reason,
                      const std::string &source = "")
      : std::runtime_error((source.empty() ? "" : source + ":") + "line " +
                           std::to_string(line) + ": " + reason),
        line_(line), reason_(reason) {}

  std::size_t line() const { return line_; }
  const std::string &reason() const { return reason_; }

private:
  std::size_t line_;
  std::string reason_;
};

inline void write_snapshots(std::ostream &os, const ShadowSet &shadow) {
  os << "# n_qubits=" << shadow.n_qubits << " ensemble=pauli";
  if (shadow.seed) {
    os << " seed=" << *shadow.seed;
  }
  os << '\n';
  std::string line;
  for (const auto &s : shadow.snapshots) {
    line.clear();
    for (Axis a : s.bases) {
      line += axis_char(a);
    }
    line += ' ';
    for (auto b : s.outcomes) {
      line += static_cast<char>('0' + b);
    }
    line += '\n';
    os << line;
  }
}

inline ShadowSet read_snapshots(std::istream &is) {
  ShadowSet shadow;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    if (!have_header) {
      if (line.rfind('#', 0) != 0) {
        throw SnapshotFormatError(line_no, "missing '# n_qubits=... "
                                           "ensemble=pauli' header");
      }
      std::istringstream fields(line.substr(1));
      std::string kv;
      std::optional<std::size_t> n;
      std::string ensemble;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw SnapshotFormatError(line_no, "bad header field '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
          if (key == "n_qubits") {
            n = std::stoul(value);
          } else if (key == "ensemble") {
            ensemble = value;
          } else if (key == "seed") {
            shadow.seed = std::stoull(value);
          }
        } catch (const std::logic_error &) {
          throw SnapshotFormatError(line_no, "bad value in '" + kv + "'");
        }
      }
      if (!n || *n == 0) {
        throw SnapshotFormatError(line_no, "header lacks a positive n_qubits");
      }
      if (ensemble != "pauli") {
        throw SnapshotFormatError(line_no, "unsupported ensemble '" +
                                               ensemble + "'");
      }
      shadow.n_qubits = *n;
      have_header = true;
      continue;
    }
    if (line.front() == '#') {
      continue;
    }

    std::istringstream fields(line);
    std::string bases;
    std::string bits;
    std::string extra;
    if (!(fields >> bases >> bits) || (fields >> extra)) {
      throw SnapshotFormatError(line_no, "expected '<bases> <outcomes>'");
    }
    if (bases.size() != shadow.n_qubits || bits.size() != shadow.n_qubits) {
      throw SnapshotFormatError(
          line_no, "expected " + std::to_string(shadow.n_qubits) +
                       " bases and outcomes, got " +
                       std::to_string(bases.size()) + " and " +
                       std::to_string(bits.size()));
    }
    Snapshot s;
    s.bases.reserve(bases.size());
    s.outcomes.reserve(bits.size());
    for (char c : bases) {
      if (c != 'X' && c != 'Y' && c != 'Z') {
        throw SnapshotFormatError(line_no, std::string("bad basis '") + c + "'");
      }
      s.bases.push_back(axis_from_char(c));
    }
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw SnapshotFormatError(line_no, std::string("bad outcome '") + c +
                                               "'");
      }
      s.outcomes.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    shadow.snapshots.push_back(std::move(s));
  }

  if (!have_header) {
    throw SnapshotFormatError(line_no, "empty snapshot file");
  }
  if (shadow.snapshots.empty()) {
    throw SnapshotFormatError(line_no, "no snapshots after header");
  }
  return shadow;
}

inline ShadowSet read_snapshots_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open snapshot file " + path);
  }
  try {
    return read_snapshots(in);
  } catch (const SnapshotFormatError &e) {
    throw SnapshotFormatError(e.line(), e.reason(), path);
  }
}

} // namespace shadowboot

#endif // SHADOWBOOT_SNAPSHOT_IO_HPP_
