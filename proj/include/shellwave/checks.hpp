#pragma once

#include <cstdint>
#include <string>
#include <vector>

/// Built-in self-checks run by `shellwave check ...`. Each line reports the
/// worst measured value against its threshold.
namespace shellwave::checks {

struct CheckLine {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckLine> lines;
  bool pass() const;
};

/// Dirac-algebra and jump identities on random (nu, eta, tau), plus trace
/// compatibility of the twist field with the renormalized jump.
SuiteReport identities_suite(int samples, std::uint64_t seed);

/// Sphere Weingarten map, projection round trips and projection gradients
/// against finite differences on a sphere and an ellipsoid.
SuiteReport geometry_suite(int samples, std::uint64_t seed);

/// Shipped profiles are admissible; bad profiles are rejected; primitive
/// jump equals the mass.
SuiteReport mollifier_suite();

/// "PASS name measured=... threshold=..." per line.
std::string format(const SuiteReport &report);

} // namespace shellwave::checks
