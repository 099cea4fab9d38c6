#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shellwave/mollifier.hpp"
#include "shellwave/radial.hpp"

/// Convergence experiments: eigenvalue sweeps of the squeezed shell toward
/// the renormalized delta shell, and the two graph-limit norms
///   a_eps = ||psi_eps - psi||,  b_eps = ||E_eps psi_eps - E_hat psi||
/// for the twisted eigenfunction psi_eps = U_eps psi.
namespace shellwave::convergence {

struct SweepRecord {
  std::string kind; ///< "eigenvalue" or "graphlimit"
  double eps = 0.0;
  double energy = 0.0; ///< E_eps, or E_hat for graph-limit rows
  std::optional<double> a;
  std::optional<double> b;
  double ref_renormalized = 0.0;
  std::optional<double> ref_naive;
  std::optional<double> diff_renormalized;
  std::optional<double> diff_naive;
  std::string profile;
  int kappa = 0;
  double wall_time = 0.0; ///< seconds; JSON only, never in the CSV
};

struct SweepOptions {
  radial::SolverOptions solver;
  std::optional<radial::EnergyWindow> window; ///< default: the full gap
  int threads = 0; ///< 0: hardware concurrency capped by SHELLWAVE_THREADS
};

/// One record per eps (eps strictly decreasing). References come from the
/// delta-shell solver at renormalize(c) and, when it has an eigenvalue and is
/// not the confinement case, at the naive c.
/// Throws ExcludedInput, InvalidArgument (degenerate limit, bad eps list) or
/// NoEigenpair.
std::vector<SweepRecord> eigenvalue_sweep(const radial::Channel &ch,
                                          const CouplingPair &c,
                                          std::span<const double> eps,
                                          const mollifier::Profile &profile,
                                          const SweepOptions &opt = {});

struct GraphLimitOptions {
  int panels = 64; ///< Gauss-Legendre panels per half-layer (16 nodes each)
  double continuity_tol = 1e-8;
  int threads = 0;
};

/// Graph-limit norms for the lowest-|E| eigenpair of renormalize(c).
/// Throws NoEigenpair when the delta shell has no gap eigenvalue.
std::vector<SweepRecord> graph_limit_run(const radial::Channel &ch,
                                         const CouplingPair &c,
                                         std::span<const double> eps,
                                         const mollifier::Profile &profile,
                                         const GraphLimitOptions &opt = {});

/// Same with a given eigenpair (psi need not belong to renormalize(c)).
std::vector<SweepRecord>
graph_limit_run(const radial::RadialEigenfunction &psi, const CouplingPair &c,
                std::span<const double> eps, const mollifier::Profile &profile,
                const GraphLimitOptions &opt = {});

struct RateFit {
  double slope;
  double intercept;
  double r2;
};

/// Least squares of log|diff| against log eps. Needs >= 4 points; throws
/// DegenerateFit if any |diff| < 1e-13.
RateFit rate_fit(std::span<const double> eps, std::span<const double> diffs);
RateFit rate_fit(std::span<const SweepRecord> records);

/// Polynomial extrapolation to eps = 0 (Neville) through the last
/// levels + 1 points, assuming an expansion in integer powers of eps.
/// levels = 1 is the classical first-order Richardson step.
double richardson_extrapolate(std::span<const double> eps,
                              std::span<const double> values, int levels = 2);

/// Worker count: min(n, hardware, SHELLWAVE_THREADS if set), at least 1.
int thread_count(int requested, int n);

struct OutputMeta {
  std::string config_hash;
  std::string config_json; ///< canonical config, embedded in JSON output
};

/// CSV with a "# shellwave-sweep/1 ..." comment line, fixed header and
/// %.17g floats. Written atomically (temp file + rename).
void write_csv(const std::string &path, std::span<const SweepRecord> records,
               const OutputMeta &meta);
std::string format_csv(std::span<const SweepRecord> records,
                       const OutputMeta &meta);

/// JSON document with schema "shellwave-sweep/1", records (including
/// wall_time) and an optional summary object (raw JSON text).
void write_json(const std::string &path, std::span<const SweepRecord> records,
                const OutputMeta &meta, const std::string &summary_json = "");

/// Writes `content` to `path` through a temporary file and rename.
void atomic_write(const std::string &path, const std::string &content);

inline constexpr const char *kCsvHeader =
    "kind,eps,energy,a,b,ref_renormalized,ref_naive,diff_renormalized,"
    "diff_naive,profile,kappa";

} // namespace shellwave::convergence
