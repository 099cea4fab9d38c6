#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "shellwave/convergence.hpp"
#include "shellwave/coupling.hpp"
#include "shellwave/errors.hpp"

using namespace shellwave;
using namespace shellwave::convergence;

namespace {

const radial::Channel kBase{-1, 1.0, 1.0};

std::vector<double> halving(int n, double eps0 = 0.1) {
  std::vector<double> eps;
  for (int j = 0; j < n; ++j)
    eps.push_back(eps0 * std::ldexp(1.0, -j));
  return eps;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("rate fit on synthetic data") {
  auto eps = halving(6);
  std::vector<double> d1, d2;
  for (double e : eps) {
    d1.push_back(e);
    d2.push_back(3 * e * e);
  }
  auto f1 = rate_fit(eps, d1);
  CHECK(f1.slope == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f1.r2 == doctest::Approx(1.0));
  auto f2 = rate_fit(eps, d2);
  CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f2.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  std::vector<double> tiny(6, 1e-14);
  CHECK_THROWS_AS(rate_fit(eps, tiny), DegenerateFit);
  CHECK_THROWS_AS(rate_fit(std::span(eps).first(3), std::span(d1).first(3)),
                  DegenerateFit);
}

TEST_CASE("Richardson extrapolation") {
  auto eps = halving(5);
  std::vector<double> v;
  for (double e : eps)
    v.push_back(-0.25 + 1.5 * e - 4 * e * e);
  CHECK(richardson_extrapolate(eps, v, 2) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(std::abs(richardson_extrapolate(eps, v, 1) + 0.25) > 1e-6);
  CHECK(richardson_extrapolate(eps, v, 1) ==
        doctest::Approx(2 * v[4] - v[3]).epsilon(1e-15));
  CHECK_THROWS_AS(richardson_extrapolate(eps, v, 5), InvalidArgument);
}

TEST_CASE("eigenvalue sweep for (1.5, 0) converges to the renormalized value") {
  auto eps = halving(6);
  auto recs = eigenvalue_sweep(kBase, {1.5, 0}, eps, mollifier::box());
  REQUIRE(recs.size() == 6);
  const double Ehat = recs[0].ref_renormalized;
  REQUIRE(recs[0].ref_naive.has_value());
  std::vector<double> E;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].kind == "eigenvalue");
    CHECK(recs[i].profile == "box");
    CHECK(recs[i].kappa == -1);
    E.push_back(recs[i].energy);
    if (i > 0)
      CHECK(*recs[i].diff_renormalized < *recs[i - 1].diff_renormalized);
  }
  CHECK(std::abs(richardson_extrapolate(eps, E, 2) - Ehat) < 1e-5);
  CHECK(std::abs(*recs[0].ref_naive - Ehat) >=
        10 * *recs.back().diff_renormalized);
}

TEST_CASE("eigenvalue sweep at d = 0 has coinciding references") {
  // (1, 1) binds nothing at kappa = -1; its charge conjugate (-1, -1) does.
  CHECK_THROWS_AS(eigenvalue_sweep(kBase, {1, 1}, halving(2), mollifier::box()),
                  NoEigenpair);
  auto recs = eigenvalue_sweep(kBase, {-1, -1}, halving(4), mollifier::box());
  REQUIRE(recs[0].ref_naive.has_value());
  CHECK(*recs[0].ref_naive == recs[0].ref_renormalized);
  CHECK(*recs.back().diff_renormalized < *recs.front().diff_renormalized);
}

TEST_CASE("eigenvalue sweep preconditions") {
  auto eps = halving(2);
  CHECK_THROWS_AS(
      eigenvalue_sweep(kBase, {std::numbers::pi, 0}, eps, mollifier::box()),
      ExcludedInput);
  CHECK_THROWS_AS(
      eigenvalue_sweep(kBase, {std::numbers::pi / 2, 0}, eps, mollifier::box()),
      InvalidArgument);
  std::vector<double> up{0.05, 0.1};
  CHECK_THROWS_AS(eigenvalue_sweep(kBase, {1.5, 0}, up, mollifier::box()),
                  InvalidArgument);
  // Naive (0, 2) is the confinement case: no naive reference, no error.
  auto recs = eigenvalue_sweep(kBase, {0, -2}, halving(2), mollifier::box());
  CHECK_FALSE(recs[0].ref_naive.has_value());
}

TEST_CASE("graph-limit norms") {
  auto eps = halving(6);
  auto recs = graph_limit_run(kBase, {1.5, 0}, eps, mollifier::box());
  REQUIRE(recs.size() == 6);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(*recs[i].a > 0);
    CHECK(*recs[i].b > 0);
    if (i > 0) {
      CHECK(*recs[i].a < *recs[i - 1].a);
      CHECK(*recs[i].b < *recs[i - 1].b);
    }
  }
  double slope = rate_fit(recs).slope;
  CHECK(slope >= 0.4);
  CHECK(slope <= 0.6);

  CHECK_THROWS_AS(graph_limit_run(kBase, {0, 0}, eps, mollifier::box()),
                  NoEigenpair);
}

TEST_CASE("graph-limit norms vanish without a shell") {
  auto c_hat = coupling::renormalize({1.5, 0}).as_coupling();
  double E = radial::delta_eigenvalues(kBase, c_hat,
                                       radial::full_gap(kBase))[0]
                 .energy;
  auto psi = radial::RadialEigenfunction::delta(kBase, c_hat, E);
  auto eps = halving(3);
  auto recs = graph_limit_run(psi, {0, 0}, eps, mollifier::raised_cosine());
  for (const auto &r : recs) {
    CHECK(*r.a == 0.0);
    CHECK(*r.b < 1e-12);
  }
}

TEST_CASE("thread count honours SHELLWAVE_THREADS") {
  setenv("SHELLWAVE_THREADS", "1", 1);
  CHECK(thread_count(0, 8) == 1);
  CHECK(thread_count(4, 8) == 1);
  unsetenv("SHELLWAVE_THREADS");
  CHECK(thread_count(3, 2) == 2);
  CHECK(thread_count(2, 8) == 2);
}

TEST_CASE("CSV and JSON output") {
  auto eps = halving(3);
  auto recs = eigenvalue_sweep(kBase, {1.5, 0}, eps, mollifier::triangle());
  OutputMeta meta{"0123456789abcdef", R"({"command":"sweep"})"};
  std::string csv = format_csv(recs, meta);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == std::string("# shellwave-sweep/1 version=0.1.0 config_hash=0123456789abcdef"));
  std::getline(is, line);
  CHECK(line == kCsvHeader);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.rfind("eigenvalue,", 0) == 0);
  }
  CHECK(rows == 3);
  CHECK(csv.find("wall_time") == std::string::npos);

  // Round-trip of a %.17g float.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", recs[1].energy);
  CHECK(std::strtod(buf, nullptr) == recs[1].energy);

  auto dir = std::filesystem::temp_directory_path() / "shellwave_test_out";
  std::filesystem::create_directories(dir);
  std::string p1 = (dir / "a.csv").string(), p2 = (dir / "b.csv").string();
  write_csv(p1, recs, meta);
  auto again = eigenvalue_sweep(kBase, {1.5, 0}, eps, mollifier::triangle());
  write_csv(p2, again, meta);
  CHECK(slurp(p1) == slurp(p2));
  CHECK_FALSE(std::filesystem::exists(p1 + ".tmp"));

  std::string pj = (dir / "a.json").string();
  write_json(pj, recs, meta, R"({"extrapolated": -0.3})");
  auto doc = nlohmann::json::parse(slurp(pj));
  CHECK(doc["schema"] == "shellwave-sweep/1");
  CHECK(doc["config_hash"] == "0123456789abcdef");
  CHECK(doc["records"].size() == 3);
  CHECK(doc["records"][0].contains("wall_time"));
  CHECK(doc["records"][0]["a"].is_null());
  CHECK(doc["summary"]["extrapolated"] == -0.3);
  std::filesystem::remove_all(dir);
}
