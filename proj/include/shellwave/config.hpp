#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shellwave/radial.hpp"
#include "shellwave/types.hpp"

/// Versioned JSON run configuration ("shellwave-config/1").
///
///   {
///     "schema": "shellwave-config/1",
///     "command": "sweep" | "graphlimit" | "spectrum",
///     "coupling": {"eta": 1.5, "tau": 0.0},
///     "surface": {"kind": "sphere", "radii": [1.0]},
///     "profile": "box",
///     "eps": [0.1, 0.05, ...],
///     "channels": [-1],
///     "mass": 1.0,
///     "window": [-0.999999, 0.999999],        (optional)
///     "spectrum": "delta" | "regularized",    (spectrum only)
///     "output": {"csv": "out.csv", "json": "out.json"},
///     "seed": 7,
///     "tolerances": {"scan_nodes": 2000, "root": 1e-12,
///                    "richardson_levels": 2, "panels": 64}
///   }
///
/// Unknown keys anywhere are rejected. Only "schema", "command" and
/// "coupling" are required.
namespace shellwave::config {

inline constexpr const char *kSchema = "shellwave-config/1";

struct Tolerances {
  int scan_nodes = 2000;
  double root = 1e-12;
  int richardson_levels = 2;
  int panels = 64;
};

struct RunConfig {
  std::string command;
  CouplingPair coupling;
  std::string surface_kind = "sphere";
  std::vector<double> radii{1.0};
  std::string profile = "box";
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  std::vector<int> channels{-1};
  double mass = 1.0;
  std::optional<radial::EnergyWindow> window;
  std::string spectrum = "delta";
  std::string output_csv;
  std::string output_json;
  std::uint64_t seed = 0;
  Tolerances tolerances;

  /// Shell radius; the spectral solver is sphere-only.
  double R0() const;
};

/// Parses and validates; throws ConfigError with a path-qualified message.
RunConfig parse(const std::string &json_text);
RunConfig load(const std::string &path);

/// Semantic checks shared by parse() and flag overrides.
void validate(const RunConfig &cfg);

/// Canonical JSON (sorted keys, compact) of the effective configuration.
std::string canonical_json(const RunConfig &cfg);

/// FNV-1a 64-bit hash of canonical_json with the output paths blanked, as
/// 16 hex digits.
std::string config_hash(const RunConfig &cfg);

} // namespace shellwave::config
