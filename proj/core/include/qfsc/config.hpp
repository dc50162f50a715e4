#ifndef QFSC_CONFIG_HPP
#define QFSC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfsc/adapted.hpp"
#include "qfsc/phase_space.hpp"

namespace qfsc {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Minimal TOML subset: [section] headers, key = value with string, boolean,
/// number and (nested, possibly multi-line) array values, '#' comments.
struct TomlValue {
  enum class Kind { string, boolean, number, array };
  Kind kind = Kind::number;
  std::string str;
  bool boolean = false;
  double number = 0.0;
  std::vector<TomlValue> items;
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDoc = std::map<std::string, TomlTable>;

TomlDoc parseToml(const std::string& text);

/// Run configuration shared by the command-line verbs.
struct Config {
  // [model]
  int d = 1;
  int bins = 2;
  double dt = 0.5;
  int cutoff = 10;
  // [state]
  std::string kind = "gauge";        // "gauge" | "squeezed" | "custom_scaled"
  std::vector<Mat> t_per_bin;        // resolved to one Hermitian block per bin
  Mat p;                             // squeeze exponent, d x d
  double u_theta = 0.0;              // U = e^{i theta} I_d
  bool strict = true;
  double custom_scale = 1.0;         // for kind = custom_scaled: scale * Sigma_T
  // [tolerances]
  double tol_exact = 1e-12;
  double tol_truncated = 1e-6;
  // [run]
  std::uint64_t seed = 42;
  int trials = 1000;
  // [words]
  std::map<std::string, Vec> words;  // step functions in C^{bins*d}

  static Config fromToml(const std::string& text);
  static Config fromFile(const std::string& path);

  PhaseSpaceModel phaseModel() const { return PhaseSpaceModel{d, bins}; }
  TimeGrid timeGrid() const { return TimeGrid{bins, d, dt}; }
  SigmaMap buildSigma() const;
  /// Commutant covariance: closed form for gauge, generic j-composition
  /// otherwise.
  SigmaMap buildSigmaPrimeMap() const;
};

}  // namespace qfsc

#endif
