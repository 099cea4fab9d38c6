#include "shellwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shellwave/errors.hpp"
#include "shellwave/mollifier.hpp"

namespace shellwave::config {

namespace {

using nlohmann::json;

void only_keys(const json &obj, const std::string &where,
               const std::set<std::string> &allowed) {
  if (!obj.is_object())
    throw ConfigError(where + ": expected an object");
  for (const auto &[key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(where + ": unknown field '" + key + "'");
}

double number(const json &v, const std::string &where) {
  if (!v.is_number())
    throw ConfigError(where + ": expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x))
    throw ConfigError(where + ": must be finite");
  return x;
}

int integer(const json &v, const std::string &where) {
  if (!v.is_number_integer())
    throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

std::string string(const json &v, const std::string &where) {
  if (!v.is_string())
    throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

template <class T, class F>
std::vector<T> array(const json &v, const std::string &where, F &&item) {
  if (!v.is_array() || v.empty())
    throw ConfigError(where + ": expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(item(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

} // namespace

double RunConfig::R0() const {
  if (surface_kind != "sphere")
    throw ConfigError("surface: the spectral solver supports only spheres");
  return radii.at(0);
}

void validate(const RunConfig &cfg) {
  static const std::set<std::string> commands{"sweep", "graphlimit",
                                              "spectrum"};
  if (!commands.count(cfg.command))
    throw ConfigError("command: must be sweep, graphlimit or spectrum");
  if (cfg.surface_kind == "sphere") {
    if (cfg.radii.size() != 1 || !(cfg.radii[0] > 0))
      throw ConfigError("surface.radii: a sphere takes one positive radius");
  } else if (cfg.surface_kind == "ellipsoid") {
    if (cfg.radii.size() != 3)
      throw ConfigError("surface.radii: an ellipsoid takes three radii");
    for (double r : cfg.radii)
      if (!(r > 0))
        throw ConfigError("surface.radii: radii must be positive");
    throw ConfigError("surface: spectral commands are sphere-only");
  } else {
    throw ConfigError("surface.kind: must be sphere or ellipsoid");
  }
  try {
    mollifier::by_name(cfg.profile);
  } catch (const InvalidArgument &) {
    throw ConfigError("profile: unknown profile '" + cfg.profile + "'");
  }
  const double R0 = cfg.radii[0];
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    if (!(cfg.eps[i] > 0) || !(cfg.eps[i] < R0 / 2))
      throw ConfigError("eps: each value must satisfy 0 < eps < R0/2");
    if (i > 0 && !(cfg.eps[i] < cfg.eps[i - 1]))
      throw ConfigError("eps: values must be strictly decreasing");
  }
  if (cfg.eps.empty())
    throw ConfigError("eps: must not be empty");
  if (cfg.channels.empty())
    throw ConfigError("channels: must not be empty");
  for (int k : cfg.channels)
    if (k == 0 || std::abs(k) > radial::kMaxKappa)
      throw ConfigError("channels: kappa must be nonzero with |kappa| <= 10");
  if (!(cfg.mass > 0))
    throw ConfigError("mass: must be positive");
  if (cfg.window) {
    const double lim = cfg.mass - 1e-6;
    if (!(cfg.window->lo < cfg.window->hi) || cfg.window->lo < -lim ||
        cfg.window->hi > lim)
      throw ConfigError("window: must satisfy -m + 1e-6 <= lo < hi <= m - "
                        "1e-6");
  }
  if (cfg.spectrum != "delta" && cfg.spectrum != "regularized")
    throw ConfigError("spectrum: must be delta or regularized");
  const auto &t = cfg.tolerances;
  if (t.scan_nodes < 2)
    throw ConfigError("tolerances.scan_nodes: must be at least 2");
  if (!(t.root > 0))
    throw ConfigError("tolerances.root: must be positive");
  if (t.richardson_levels < 1)
    throw ConfigError("tolerances.richardson_levels: must be at least 1");
  if (t.panels < 1)
    throw ConfigError("tolerances.panels: must be positive");
}

RunConfig parse(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  only_keys(doc, "config",
            {"schema", "command", "coupling", "surface", "profile", "eps",
             "channels", "mass", "window", "spectrum", "output", "seed",
             "tolerances"});
  if (!doc.contains("schema") || string(doc["schema"], "schema") != kSchema)
    throw ConfigError(std::string("schema: must be \"") + kSchema + "\"");
  if (!doc.contains("command"))
    throw ConfigError("command: required");
  if (!doc.contains("coupling"))
    throw ConfigError("coupling: required");

  RunConfig cfg;
  cfg.command = string(doc["command"], "command");
  const json &c = doc["coupling"];
  only_keys(c, "coupling", {"eta", "tau"});
  if (!c.contains("eta") || !c.contains("tau"))
    throw ConfigError("coupling: eta and tau are required");
  cfg.coupling = {number(c["eta"], "coupling.eta"),
                  number(c["tau"], "coupling.tau")};

  if (doc.contains("surface")) {
    const json &s = doc["surface"];
    only_keys(s, "surface", {"kind", "radii"});
    if (s.contains("kind"))
      cfg.surface_kind = string(s["kind"], "surface.kind");
    if (s.contains("radii"))
      cfg.radii = array<double>(s["radii"], "surface.radii", number);
  }
  if (doc.contains("profile"))
    cfg.profile = string(doc["profile"], "profile");
  if (doc.contains("eps"))
    cfg.eps = array<double>(doc["eps"], "eps", number);
  if (doc.contains("channels"))
    cfg.channels = array<int>(doc["channels"], "channels", integer);
  if (doc.contains("mass"))
    cfg.mass = number(doc["mass"], "mass");
  if (doc.contains("window")) {
    auto w = array<double>(doc["window"], "window", number);
    if (w.size() != 2)
      throw ConfigError("window: expected [lo, hi]");
    cfg.window = radial::EnergyWindow{w[0], w[1]};
  }
  if (doc.contains("spectrum"))
    cfg.spectrum = string(doc["spectrum"], "spectrum");
  if (doc.contains("output")) {
    const json &o = doc["output"];
    only_keys(o, "output", {"csv", "json"});
    if (o.contains("csv"))
      cfg.output_csv = string(o["csv"], "output.csv");
    if (o.contains("json"))
      cfg.output_json = string(o["json"], "output.json");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      throw ConfigError("seed: expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const json &t = doc["tolerances"];
    only_keys(t, "tolerances",
              {"scan_nodes", "root", "richardson_levels", "panels"});
    if (t.contains("scan_nodes"))
      cfg.tolerances.scan_nodes = integer(t["scan_nodes"], "tolerances.scan_nodes");
    if (t.contains("root"))
      cfg.tolerances.root = number(t["root"], "tolerances.root");
    if (t.contains("richardson_levels"))
      cfg.tolerances.richardson_levels =
          integer(t["richardson_levels"], "tolerances.richardson_levels");
    if (t.contains("panels"))
      cfg.tolerances.panels = integer(t["panels"], "tolerances.panels");
  }
  validate(cfg);
  return cfg;
}

RunConfig load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string canonical_json(const RunConfig &cfg) {
  json doc;
  doc["schema"] = kSchema;
  doc["command"] = cfg.command;
  doc["coupling"] = {{"eta", cfg.coupling.eta}, {"tau", cfg.coupling.tau}};
  doc["surface"] = {{"kind", cfg.surface_kind}, {"radii", cfg.radii}};
  doc["profile"] = cfg.profile;
  doc["eps"] = cfg.eps;
  doc["channels"] = cfg.channels;
  doc["mass"] = cfg.mass;
  if (cfg.window)
    doc["window"] = {cfg.window->lo, cfg.window->hi};
  doc["spectrum"] = cfg.spectrum;
  doc["output"] = {{"csv", cfg.output_csv}, {"json", cfg.output_json}};
  doc["seed"] = cfg.seed;
  doc["tolerances"] = {{"scan_nodes", cfg.tolerances.scan_nodes},
                       {"root", cfg.tolerances.root},
                       {"richardson_levels", cfg.tolerances.richardson_levels},
                       {"panels", cfg.tolerances.panels}};
  return doc.dump();
}

std::string config_hash(const RunConfig &cfg) {
  // Output paths name where results go, not what they are.
  RunConfig key = cfg;
  key.output_csv.clear();
  key.output_json.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(key)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace shellwave::config
