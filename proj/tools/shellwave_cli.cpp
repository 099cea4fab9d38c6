// shellwave command-line front end.
//
// Exit status: 0 success, 1 failed self-check, 2 invalid input or config,
// 3 solver error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shellwave/checks.hpp"
#include "shellwave/config.hpp"
#include "shellwave/convergence.hpp"
#include "shellwave/coupling.hpp"
#include "shellwave/errors.hpp"
#include "shellwave/mollifier.hpp"
#include "shellwave/radial.hpp"
#include "shellwave/version.hpp"

using namespace shellwave;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Flags shared by spectrum / sweep / graphlimit; each mirrors a config key.
struct RunFlags {
  std::string config_path;
  double eta = 0, tau = 0;
  std::string profile;
  std::vector<double> eps;
  std::vector<int> channels;
  double mass = 0;
  double radius = 0;
  std::vector<double> window;
  std::string csv, json;
  std::uint64_t seed = 0;
  int scan_nodes = 0;
  double root_tol = 0;
  int richardson_levels = 0;
  int panels = 0;
  int threads = 0;
  bool renormalize = false;

  std::vector<CLI::Option *> opts;

  void attach(CLI::App *app) {
    opts = {
        app->add_option("--config", config_path, "JSON run configuration")
            ->check(CLI::ExistingFile),
        app->add_option("--eta", eta, "electrostatic strength"),
        app->add_option("--tau", tau, "Lorentz-scalar strength"),
        app->add_option("--profile", profile,
                        "box | triangle | cosine | asymmetric"),
        app->add_option("--eps", eps, "shell half-widths, decreasing"),
        app->add_option("--channels", channels, "kappa values"),
        app->add_option("--mass", mass, "particle mass"),
        app->add_option("--radius", radius, "sphere radius R0"),
        app->add_option("--window", window, "energy window lo hi")
            ->expected(2),
        app->add_option("--csv", csv, "CSV output path"),
        app->add_option("--json", json, "JSON output path"),
        app->add_option("--seed", seed, "random seed"),
        app->add_option("--scan-nodes", scan_nodes, "root scan grid size"),
        app->add_option("--root-tol", root_tol, "bisection tolerance"),
        app->add_option("--richardson-levels", richardson_levels,
                        "extrapolation order"),
        app->add_option("--panels", panels, "quadrature panels per half-layer"),
        app->add_option("--threads", threads, "worker threads (0: auto)"),
    };
  }

  bool given(const char *name) const {
    for (auto *o : opts)
      if (o->check_lname(name))
        return o->count() > 0;
    return false;
  }

  config::RunConfig resolve(const std::string &command) const {
    config::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = config::load(config_path);
      if (cfg.command != command)
        throw ConfigError("config command '" + cfg.command +
                          "' does not match '" + command + "'");
    } else {
      if (!given("eta") || !given("tau"))
        throw ConfigError("--eta and --tau are required without --config");
      cfg.command = command;
    }
    if (given("eta"))
      cfg.coupling.eta = eta;
    if (given("tau"))
      cfg.coupling.tau = tau;
    if (given("profile"))
      cfg.profile = profile;
    if (given("eps"))
      cfg.eps = eps;
    if (given("channels"))
      cfg.channels = channels;
    if (given("mass"))
      cfg.mass = mass;
    if (given("radius"))
      cfg.radii = {radius};
    if (given("window"))
      cfg.window = radial::EnergyWindow{window.at(0), window.at(1)};
    if (given("csv"))
      cfg.output_csv = csv;
    if (given("json"))
      cfg.output_json = json;
    if (given("seed"))
      cfg.seed = seed;
    if (given("scan-nodes"))
      cfg.tolerances.scan_nodes = scan_nodes;
    if (given("root-tol"))
      cfg.tolerances.root = root_tol;
    if (given("richardson-levels"))
      cfg.tolerances.richardson_levels = richardson_levels;
    if (given("panels"))
      cfg.tolerances.panels = panels;
    config::validate(cfg);
    return cfg;
  }
};

radial::SolverOptions solver_options(const config::RunConfig &cfg) {
  radial::SolverOptions opt;
  opt.scan_nodes = cfg.tolerances.scan_nodes;
  opt.root_tol = cfg.tolerances.root;
  return opt;
}

radial::Channel channel(const config::RunConfig &cfg, int kappa) {
  radial::Channel ch{kappa, cfg.mass, cfg.R0()};
  ch.validate();
  return ch;
}

convergence::OutputMeta meta(const config::RunConfig &cfg) {
  return {config::config_hash(cfg), config::canonical_json(cfg)};
}

void emit(const config::RunConfig &cfg,
          const std::vector<convergence::SweepRecord> &records,
          const nlohmann::ordered_json &summary) {
  const auto m = meta(cfg);
  if (cfg.output_csv.empty())
    std::cout << convergence::format_csv(records, m);
  else
    convergence::write_csv(cfg.output_csv, records, m);
  if (!cfg.output_json.empty())
    convergence::write_json(cfg.output_json, records, m, summary.dump());
  // Summary goes to stderr when CSV occupies stdout.
  (cfg.output_csv.empty() ? std::cerr : std::cout) << summary.dump(2) << "\n";
}

int run_renormalize(double eta, double tau) {
  const CouplingPair c{eta, tau};
  const auto r = coupling::renormalize(c);
  const auto cls = coupling::classify(c);
  std::cout << "eta_hat = " << g17(r.eta_hat) << "\n"
            << "tau_hat = " << g17(r.tau_hat) << "\n"
            << "d_hat = " << g17(r.d_hat()) << "\n"
            << "class = " << coupling::to_string(cls.tag) << "\n";
  return 0;
}

int run_classify(double eta, double tau) {
  const CouplingPair c{eta, tau};
  const auto cls = coupling::classify(c);
  std::cout << "d = " << g17(c.d()) << "\n"
            << "class = " << coupling::to_string(cls.tag) << "\n"
            << "confinement_input = "
            << (cls.confinement_input ? "true" : "false") << "\n";
  return 0;
}

int run_check(const std::string &suite, int samples, std::uint64_t seed) {
  if (samples < 1)
    throw ConfigError("--samples must be positive");
  checks::SuiteReport rep;
  if (suite == "identities")
    rep = checks::identities_suite(samples, seed);
  else if (suite == "geometry")
    rep = checks::geometry_suite(samples, seed);
  else
    rep = checks::mollifier_suite();
  std::cout << checks::format(rep)
            << (rep.pass() ? "pass" : "fail") << "\n";
  return rep.pass() ? 0 : kExitCheckFailed;
}

int run_spectrum(const std::string &kind, const RunFlags &flags) {
  const auto cfg = flags.resolve("spectrum");
  const auto opt = solver_options(cfg);
  const auto prof = mollifier::by_name(cfg.profile);
  CouplingPair c = cfg.coupling;
  if (kind == "delta" && flags.renormalize)
    c = coupling::renormalize(c).as_coupling();
  for (int kappa : cfg.channels) {
    const auto ch = channel(cfg, kappa);
    const auto win = cfg.window ? *cfg.window : radial::full_gap(ch, opt);
    if (kind == "delta") {
      for (const auto &e : radial::delta_eigenvalues(ch, c, win, opt))
        std::cout << "kappa=" << kappa << " energy=" << g17(e.energy)
                  << " residual=" << g17(e.residual) << "\n";
    } else {
      for (double eps : cfg.eps)
        for (const auto &e :
             radial::regularized_eigenvalues(ch, c, eps, prof, win, opt))
          std::cout << "kappa=" << kappa << " eps=" << g17(eps)
                    << " energy=" << g17(e.energy)
                    << " residual=" << g17(e.residual) << "\n";
    }
  }
  return 0;
}

int run_sweep(const RunFlags &flags) {
  const auto cfg = flags.resolve("sweep");
  convergence::SweepOptions opt;
  opt.solver = solver_options(cfg);
  opt.window = cfg.window;
  opt.threads = flags.threads;
  const auto prof = mollifier::by_name(cfg.profile);

  std::vector<convergence::SweepRecord> all;
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (int kappa : cfg.channels) {
    const auto recs = convergence::eigenvalue_sweep(channel(cfg, kappa),
                                                    cfg.coupling, cfg.eps,
                                                    prof, opt);
    std::vector<double> energies;
    for (const auto &r : recs)
      energies.push_back(r.energy);
    nlohmann::ordered_json s;
    s["kappa"] = kappa;
    s["ref_renormalized"] = recs.front().ref_renormalized;
    if (recs.front().ref_naive)
      s["ref_naive"] = *recs.front().ref_naive;
    const int levels = std::min<int>(cfg.tolerances.richardson_levels,
                                     static_cast<int>(recs.size()) - 1);
    if (levels >= 1) {
      const double lim =
          convergence::richardson_extrapolate(cfg.eps, energies, levels);
      s["extrapolated"] = lim;
      s["extrapolation_error"] = lim - recs.front().ref_renormalized;
    }
    if (recs.size() >= 4) {
      try {
        const auto fit = convergence::rate_fit(recs);
        s["rate_slope"] = fit.slope;
        s["rate_r2"] = fit.r2;
      } catch (const DegenerateFit &) {
      }
    }
    summary.push_back(s);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  emit(cfg, all, summary);
  return 0;
}

int run_graphlimit(const RunFlags &flags) {
  const auto cfg = flags.resolve("graphlimit");
  convergence::GraphLimitOptions opt;
  opt.panels = cfg.tolerances.panels;
  opt.threads = flags.threads;
  const auto prof = mollifier::by_name(cfg.profile);

  std::vector<convergence::SweepRecord> all;
  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  for (int kappa : cfg.channels) {
    const auto recs = convergence::graph_limit_run(channel(cfg, kappa),
                                                   cfg.coupling, cfg.eps,
                                                   prof, opt);
    nlohmann::ordered_json s;
    s["kappa"] = kappa;
    s["energy"] = recs.front().energy;
    if (recs.size() >= 4) {
      std::vector<double> a;
      for (const auto &r : recs)
        a.push_back(*r.a);
      try {
        s["a_slope"] = convergence::rate_fit(cfg.eps, a).slope;
      } catch (const DegenerateFit &) {
      }
    }
    summary.push_back(s);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  emit(cfg, all, summary);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Squeezed delta-shell Dirac operators: renormalization, "
               "geometry checks and convergence experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  double eta = 0, tau = 0;
  auto *renorm = app.add_subcommand("renormalize", "renormalized couplings");
  renorm->add_option("--eta", eta)->required();
  renorm->add_option("--tau", tau)->required();
  auto *classify = app.add_subcommand("classify", "coupling regime");
  classify->add_option("--eta", eta)->required();
  classify->add_option("--tau", tau)->required();

  std::string suite;
  int samples = 1000;
  std::uint64_t seed = 7;
  auto *check = app.add_subcommand("check", "built-in identity suites");
  check->add_option("suite", suite)
      ->required()
      ->check(CLI::IsMember({"identities", "geometry", "mollifier"}));
  check->add_option("--samples", samples);
  check->add_option("--seed", seed);

  std::string spectrum_kind;
  RunFlags spectrum_flags, sweep_flags, graph_flags;
  auto *spectrum = app.add_subcommand("spectrum", "gap eigenvalues");
  spectrum->add_option("kind", spectrum_kind)
      ->required()
      ->check(CLI::IsMember({"delta", "regularized"}));
  spectrum_flags.attach(spectrum);
  spectrum->add_flag("--renormalize", spectrum_flags.renormalize,
                     "delta: use renormalize(eta, tau) as shell strengths");
  auto *sweep = app.add_subcommand("sweep", "eigenvalue convergence sweep");
  sweep_flags.attach(sweep);
  auto *graph = app.add_subcommand("graphlimit", "graph-limit norms a, b");
  graph_flags.attach(graph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*renorm)
      return run_renormalize(eta, tau);
    if (*classify)
      return run_classify(eta, tau);
    if (*check)
      return run_check(suite, samples, seed);
    if (*spectrum)
      return run_spectrum(spectrum_kind, spectrum_flags);
    if (*sweep)
      return run_sweep(sweep_flags);
    if (*graph)
      return run_graphlimit(graph_flags);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidArgument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error &e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitValidation;
}
