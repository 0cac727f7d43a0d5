#ifndef SHADOWBOOT_CONFIG_HPP_
#define SHADOWBOOT_CONFIG_HPP_

#include "shadowboot/csv.hpp"
#include "shadowboot/pauli.hpp"
#include "shadowboot/risk.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <type_traits>
#include <vector>

// Key-value experiment configuration:
//
//   # comment
//   n_qubits = 10
//   alphas = 0.05, 0.10
//
// Every key is optional; defaults reproduce the 10-qubit, 27-observable
// setup with N = 1000, K = 10, B = 1000.

namespace shadowboot {

class ConfigError : public std::invalid_argument {
public:
  ConfigError(const std::string &field, const std::string &message)
      : std::invalid_argument("config field '" + field + "': " + message),
        field_(field) {}

  const std::string &field() const { return field_; }

private:
  std::string field_;
};

struct ExperimentConfig {
  std::size_t n_qubits = 10;
  std::uint64_t theta_seed = 7;
  std::optional<std::vector<double>> theta; // overrides theta_seed
  std::size_t N = 1000;
  std::size_t K = 10;
  std::size_t B = 1000;
  std::vector<double> alphas = {0.05, 0.10};
  std::string observables = "adjacent-xyz";
  GaussianScaling gaussian_scaling = GaussianScaling::Total;
  std::uint64_t shadow_seed = 11;
  std::uint64_t bootstrap_seed = 13;
  std::size_t bin_count = 50;
  std::size_t grid_size = 200;
  double coverage = 0.95;
  std::vector<double> bound_epsilons = {0.95, 0.50};
  std::vector<std::size_t> sweep_n;

  /// --seed: theta, shadow and bootstrap seeds become seed, seed+1, seed+2.
  void override_seeds(std::uint64_t seed) {
    theta_seed = seed;
    shadow_seed = seed + 1;
    bootstrap_seed = seed + 2;
  }

  std::vector<PauliObservable> observable_list() const {
    if (observables == "adjacent-xyz") {
      return adjacent_xyz(n_qubits);
    }
    std::vector<PauliObservable> out;
    for (const auto &label : split(observables, ',')) {
      std::string trimmed;
      for (char c : label) {
        if (c != ' ' && c != '\t') {
          trimmed += c;
        }
      }
      try {
        out.push_back(PauliObservable::parse(trimmed));
      } catch (const std::exception &e) {
        throw ConfigError("observables", e.what());
      }
    }
    return out;
  }

  void validate() const {
    if (n_qubits == 0 || n_qubits > 20) {
      throw ConfigError("n_qubits", "must be in [1, 20]");
    }
    if (theta && theta->size() != 2 * n_qubits) {
      throw ConfigError("theta", "expected " + std::to_string(2 * n_qubits) +
                                     " angles, got " +
                                     std::to_string(theta->size()));
    }
    if (theta) {
      for (double t : *theta) {
        if (!std::isfinite(t)) {
          throw ConfigError("theta", "angles must be finite");
        }
      }
    }
    if (N == 0) {
      throw ConfigError("N", "must be positive");
    }
    if (K == 0) {
      throw ConfigError("K", "must be positive");
    }
    if (K > N) {
      throw ConfigError("K", "must not exceed N (" + std::to_string(N) + ")");
    }
    if (B == 0) {
      throw ConfigError("B", "must be positive");
    }
    if (alphas.empty()) {
      throw ConfigError("alphas", "at least one level required");
    }
    for (double a : alphas) {
      if (!(a > 0.0 && a < 1.0)) {
        throw ConfigError("alphas", "levels must lie in (0, 1)");
      }
    }
    if (bin_count == 0) {
      throw ConfigError("bin_count", "must be positive");
    }
    if (grid_size < 2) {
      throw ConfigError("grid_size", "must be >= 2");
    }
    if (!(coverage > 0.0 && coverage < 1.0)) {
      throw ConfigError("coverage", "must lie in (0, 1)");
    }
    for (double e : bound_epsilons) {
      if (!(e > 0.0) || !std::isfinite(e)) {
        throw ConfigError("bound_epsilons", "must be positive");
      }
    }
    for (auto n : sweep_n) {
      if (n < K) {
        throw ConfigError("sweep_n", "every N must be >= K");
      }
    }
    const auto obs = observable_list();
    if (obs.empty()) {
      throw ConfigError("observables", "no observables for " +
                                           std::to_string(n_qubits) + " qubits");
    }
    for (const auto &o : obs) {
      if (o.weight() == 0) {
        throw ConfigError("observables", "identity is not a measured observable");
      }
      if (o.min_qubits() > n_qubits) {
        throw ConfigError("observables", o.label() + " acts outside " +
                                             std::to_string(n_qubits) + " qubits");
      }
    }
  }

  /// Canonical "key = value" text: the basis of the config hash.
  std::string canonical() const {
    std::ostringstream os;
    auto list = [](const auto &v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
          s += ",";
        }
        if constexpr (std::is_floating_point_v<
                          std::decay_t<decltype(v[0])>>) {
          s += format_double(v[i]);
        } else {
          s += std::to_string(v[i]);
        }
      }
      return s;
    };
    os << "n_qubits = " << n_qubits << '\n';
    if (theta) {
      os << "theta = " << list(*theta) << '\n';
    } else {
      os << "theta_seed = " << theta_seed << '\n';
    }
    os << "N = " << N << '\n'
       << "K = " << K << '\n'
       << "B = " << B << '\n'
       << "alphas = " << list(alphas) << '\n'
       << "observables = " << observables << '\n'
       << "gaussian_scaling = " << scaling_name(gaussian_scaling) << '\n'
       << "shadow_seed = " << shadow_seed << '\n'
       << "bootstrap_seed = " << bootstrap_seed << '\n'
       << "bin_count = " << bin_count << '\n'
       << "grid_size = " << grid_size << '\n'
       << "coverage = " << format_double(coverage) << '\n'
       << "bound_epsilons = " << list(bound_epsilons) << '\n'
       << "sweep_n = " << list(sweep_n) << '\n';
    return os.str();
  }

  /// 64-bit FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

namespace detail {
inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(const std::string &field, const std::string &v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(field, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

inline double parse_real(const std::string &field, const std::string &v) {
  try {
    return parse_double(v, field);
  } catch (const std::invalid_argument &) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
}

inline std::vector<double> parse_reals(const std::string &field,
                                       const std::string &v) {
  std::vector<double> out;
  if (trim(v).empty()) {
    return out;
  }
  for (const auto &item : split(v, ',')) {
    out.push_back(parse_real(field, trim(item)));
  }
  return out;
}

inline std::vector<std::size_t> parse_counts(const std::string &field,
                                             const std::string &v) {
  std::vector<std::size_t> out;
  if (trim(v).empty()) {
    return out;
  }
  for (const auto &item : split(v, ',')) {
    out.push_back(parse_u64(field, trim(item)));
  }
  return out;
}
} // namespace detail

/// Applies one key to `cfg`. Throws ConfigError for unknown keys or bad
/// values.
inline void set_config_value(ExperimentConfig &cfg, const std::string &key,
                             const std::string &raw) {
  using namespace detail;
  const std::string value = trim(raw);
  if (key == "n_qubits") {
    cfg.n_qubits = parse_u64(key, value);
  } else if (key == "theta_seed") {
    cfg.theta_seed = parse_u64(key, value);
  } else if (key == "theta") {
    cfg.theta = parse_reals(key, value);
  } else if (key == "N") {
    cfg.N = parse_u64(key, value);
  } else if (key == "K") {
    cfg.K = parse_u64(key, value);
  } else if (key == "B") {
    cfg.B = parse_u64(key, value);
  } else if (key == "alphas") {
    cfg.alphas = parse_reals(key, value);
  } else if (key == "observables") {
    cfg.observables = value;
  } else if (key == "gaussian_scaling") {
    try {
      cfg.gaussian_scaling = parse_scaling(value);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "shadow_seed") {
    cfg.shadow_seed = parse_u64(key, value);
  } else if (key == "bootstrap_seed") {
    cfg.bootstrap_seed = parse_u64(key, value);
  } else if (key == "bin_count") {
    cfg.bin_count = parse_u64(key, value);
  } else if (key == "grid_size") {
    cfg.grid_size = parse_u64(key, value);
  } else if (key == "coverage") {
    cfg.coverage = parse_real(key, value);
  } else if (key == "bound_epsilons") {
    cfg.bound_epsilons = parse_reals(key, value);
  } else if (key == "sweep_n") {
    cfg.sweep_n = parse_counts(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

inline ExperimentConfig parse_config(std::istream &in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value'");
    }
    set_config_value(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path);
  }
  return parse_config(in);
}

} // namespace shadowboot

#endif // SHADOWBOOT_CONFIG_HPP_
