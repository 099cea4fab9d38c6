#include "shellwave/convergence.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "shellwave/clifford.hpp"
#include "shellwave/coupling.hpp"
#include "shellwave/errors.hpp"
#include "shellwave/quadrature.hpp"
#include "shellwave/version.hpp"

namespace shellwave::convergence {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_eps_list(std::span<const double> eps, double R0) {
  if (eps.empty())
    throw InvalidArgument("eps list is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0) || !(eps[i] < R0 / 2))
      throw InvalidArgument("each eps must satisfy 0 < eps < R0/2");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw InvalidArgument("eps list must be strictly decreasing");
  }
}

// Runs f(0..n-1) on a small pool; results keep their index order.
template <class T, class F>
std::vector<T> parallel_map(int n, int threads, F &&f) {
  std::vector<T> out(n);
  const int workers = thread_count(threads, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i)
      out[i] = f(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
  return out;
}

std::optional<double> lowest_abs(const std::vector<radial::Eigenvalue> &ev) {
  std::optional<double> best;
  for (const auto &e : ev)
    if (!best || std::abs(e.energy) < std::abs(*best))
      best = e.energy;
  return best;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double> &v) { return v ? fmt(*v) : ""; }

nlohmann::json opt_json(const std::optional<double> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<SweepRecord> graph_limit_impl(const radial::RadialEigenfunction &psi,
                                          const CouplingPair &c,
                                          std::span<const double> eps,
                                          const mollifier::Profile &profile,
                                          const GraphLimitOptions &opt,
                                          bool check_continuity) {
  const radial::Channel &ch = psi.channel();
  check_eps_list(eps, ch.R0);
  if (opt.panels < 1)
    throw InvalidArgument("panels must be positive");
  const double E = psi.energy();
  const Mat2 A = radial::radial_generator(c);
  const double d = c.d();
  Mat2 Bt = Mat2::Zero();
  Bt(0, 0) = c.eta + c.tau;
  Bt(1, 1) = c.eta - c.tau;
  Mat2 J;
  J << 0, 1, -1, 0;
  const auto rule = quadrature::gauss_legendre(16);

  return parallel_map<SweepRecord>(
      static_cast<int>(eps.size()), opt.threads, [&](int idx) {
        const auto t0 = Clock::now();
        const double e = eps[idx];
        const auto h = mollifier::scaled_profile(profile, e);
        const auto H = mollifier::primitive(profile, e);

        if (check_continuity) {
          auto [in, out] = psi.traces();
          Vec2 lhs = clifford::exp_square_scalar(A, d, H.limit_minus()) * in;
          Vec2 rhs = clifford::exp_square_scalar(A, d, H.limit_plus()) * out;
          double gap = (lhs - rhs).norm() / rhs.norm();
          if (!(gap < opt.continuity_tol))
            throw Error("twisted eigenfunction is discontinuous at the shell "
                        "(relative gap " +
                        std::to_string(gap) + ")");
        }

        auto a2 = [&](double r) {
          Mat2 U = clifford::exp_square_scalar(A, d, H(r - ch.R0));
          return ((U - Mat2::Identity()) * psi(r)).squaredNorm();
        };
        auto b2 = [&](double r) {
          const double p = r - ch.R0;
          const double hv = h(p);
          const Mat2 U = clifford::exp_square_scalar(A, d, H(p));
          const Mat2 dU = -hv * A * U;
          const Vec2 v = psi(r), dv = psi.derivative(r);
          Mat2 K;
          K << ch.m, -ch.kappa / r, -ch.kappa / r, -ch.m;
          Vec2 res = J * (dU * v + U * dv) + K * U * v + hv * Bt * U * v - E * v;
          return res.squaredNorm();
        };
        double sa = 0, sb = 0;
        for (auto [lo, hi] : {std::pair{ch.R0 - e, ch.R0}, {ch.R0, ch.R0 + e}}) {
          sa += quadrature::composite_gauss(a2, lo, hi, opt.panels, rule);
          sb += quadrature::composite_gauss(b2, lo, hi, opt.panels, rule);
        }
        SweepRecord rec;
        rec.kind = "graphlimit";
        rec.eps = e;
        rec.energy = E;
        rec.a = std::sqrt(sa);
        rec.b = std::sqrt(sb);
        rec.ref_renormalized = E;
        rec.profile = profile.name();
        rec.kappa = ch.kappa;
        rec.wall_time = seconds_since(t0);
        return rec;
      });
}

} // namespace

int thread_count(int requested, int n) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int cap = requested > 0 ? requested : std::max(hw, 1);
  if (const char *env = std::getenv("SHELLWAVE_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0)
      cap = std::min<long>(cap, v);
  }
  return std::max(1, std::min(cap, n));
}

std::vector<SweepRecord> eigenvalue_sweep(const radial::Channel &ch,
                                          const CouplingPair &c,
                                          std::span<const double> eps,
                                          const mollifier::Profile &profile,
                                          const SweepOptions &opt) {
  ch.validate();
  check_eps_list(eps, ch.R0);
  const auto cls = coupling::classify(c);
  if (cls.tag == coupling::CouplingClass::ExcludedInput)
    throw ExcludedInput("coupling lies on the excluded set d = (2k+1)^2 pi^2");
  const auto ren = coupling::renormalize(c);
  if (cls.tag == coupling::CouplingClass::LimitCritical ||
      cls.tag == coupling::CouplingClass::LimitConfinement)
    throw InvalidArgument("renormalized coupling is degenerate (d_hat in "
                          "{0, 4, -4}) for a nonzero input");
  const radial::EnergyWindow window =
      opt.window.value_or(radial::full_gap(ch, opt.solver));

  const auto E_ren = lowest_abs(
      radial::delta_eigenvalues(ch, ren.as_coupling(), window, opt.solver));
  if (!E_ren)
    throw NoEigenpair("no gap eigenvalue for the renormalized delta shell in "
                      "this channel and window");
  std::optional<double> E_naive;
  if (std::abs(c.d() + 4.0) >= clifford::kCriticalTol)
    E_naive = lowest_abs(radial::delta_eigenvalues(ch, c, window, opt.solver));

  return parallel_map<SweepRecord>(
      static_cast<int>(eps.size()), opt.threads, [&](int idx) {
        const auto t0 = Clock::now();
        const auto E = lowest_abs(radial::regularized_eigenvalues(
            ch, c, eps[idx], profile, window, opt.solver));
        if (!E)
          throw NoEigenpair("no regularized gap eigenvalue at eps = " +
                            fmt(eps[idx]));
        SweepRecord rec;
        rec.kind = "eigenvalue";
        rec.eps = eps[idx];
        rec.energy = *E;
        rec.ref_renormalized = *E_ren;
        rec.ref_naive = E_naive;
        rec.diff_renormalized = std::abs(*E - *E_ren);
        if (E_naive)
          rec.diff_naive = std::abs(*E - *E_naive);
        rec.profile = profile.name();
        rec.kappa = ch.kappa;
        rec.wall_time = seconds_since(t0);
        return rec;
      });
}

std::vector<SweepRecord> graph_limit_run(const radial::Channel &ch,
                                         const CouplingPair &c,
                                         std::span<const double> eps,
                                         const mollifier::Profile &profile,
                                         const GraphLimitOptions &opt) {
  ch.validate();
  if (coupling::classify(c).tag == coupling::CouplingClass::ExcludedInput)
    throw ExcludedInput("coupling lies on the excluded set d = (2k+1)^2 pi^2");
  const auto ren = coupling::renormalize(c);
  std::optional<double> E;
  if (std::abs(ren.d_hat() + 4.0) >= clifford::kCriticalTol)
    E = lowest_abs(radial::delta_eigenvalues(ch, ren.as_coupling(),
                                             radial::full_gap(ch)));
  if (!E)
    throw NoEigenpair("no delta-shell eigenpair for the renormalized coupling");
  auto psi = radial::RadialEigenfunction::delta(ch, ren.as_coupling(), *E);
  return graph_limit_impl(psi, c, eps, profile, opt, true);
}

std::vector<SweepRecord>
graph_limit_run(const radial::RadialEigenfunction &psi, const CouplingPair &c,
                std::span<const double> eps, const mollifier::Profile &profile,
                const GraphLimitOptions &opt) {
  return graph_limit_impl(psi, c, eps, profile, opt, false);
}

RateFit rate_fit(std::span<const double> eps, std::span<const double> diffs) {
  if (eps.size() != diffs.size())
    throw InvalidArgument("rate_fit: size mismatch");
  if (eps.size() < 4)
    throw DegenerateFit("rate_fit needs at least 4 points");
  const std::size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(diffs[i]) >= 1e-13))
      throw DegenerateFit("rate_fit: difference below 1e-13");
    if (!(eps[i] > 0))
      throw InvalidArgument("rate_fit: eps must be positive");
    double x = std::log(eps[i]), y = std::log(std::abs(diffs[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n,
               cyy = syy - sy * sy / n;
  if (!(cxx > 0))
    throw DegenerateFit("rate_fit: eps values are not distinct");
  RateFit fit;
  fit.slope = cxy / cxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
  return fit;
}

RateFit rate_fit(std::span<const SweepRecord> records) {
  std::vector<double> eps, diffs;
  for (const auto &r : records) {
    eps.push_back(r.eps);
    if (r.diff_renormalized)
      diffs.push_back(*r.diff_renormalized);
    else if (r.a)
      diffs.push_back(*r.a);
    else
      throw InvalidArgument("rate_fit: record has no difference to fit");
  }
  return rate_fit(eps, diffs);
}

double richardson_extrapolate(std::span<const double> eps,
                              std::span<const double> values, int levels) {
  if (eps.size() != values.size())
    throw InvalidArgument("richardson: size mismatch");
  if (levels < 1 || static_cast<std::size_t>(levels) + 1 > eps.size())
    throw InvalidArgument("richardson: not enough points for the requested "
                          "number of levels");
  const std::size_t n = levels + 1, off = eps.size() - n;
  std::vector<double> x(eps.begin() + off, eps.end());
  std::vector<double> p(values.begin() + off, values.end());
  // Neville's scheme evaluated at 0.
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i)
      p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
  return p[0];
}

std::string format_csv(std::span<const SweepRecord> records,
                       const OutputMeta &meta) {
  std::ostringstream os;
  os << "# shellwave-sweep/1 version=" << kVersion
     << " config_hash=" << meta.config_hash << "\n";
  os << kCsvHeader << "\n";
  for (const auto &r : records) {
    os << r.kind << ',' << fmt(r.eps) << ',' << fmt(r.energy) << ','
       << fmt(r.a) << ',' << fmt(r.b) << ',' << fmt(r.ref_renormalized) << ','
       << fmt(r.ref_naive) << ',' << fmt(r.diff_renormalized) << ','
       << fmt(r.diff_naive) << ',' << r.profile << ',' << r.kappa << "\n";
  }
  return os.str();
}

void atomic_write(const std::string &path, const std::string &content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out)
      throw Error("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

void write_csv(const std::string &path, std::span<const SweepRecord> records,
               const OutputMeta &meta) {
  atomic_write(path, format_csv(records, meta));
}

void write_json(const std::string &path, std::span<const SweepRecord> records,
                const OutputMeta &meta, const std::string &summary_json) {
  nlohmann::ordered_json doc;
  doc["schema"] = "shellwave-sweep/1";
  doc["version"] = kVersion;
  doc["config_hash"] = meta.config_hash;
  doc["config"] = meta.config_json.empty()
                      ? nlohmann::ordered_json(nullptr)
                      : nlohmann::ordered_json::parse(meta.config_json);
  auto &rows = doc["records"] = nlohmann::ordered_json::array();
  for (const auto &r : records) {
    nlohmann::ordered_json row;
    row["kind"] = r.kind;
    row["eps"] = r.eps;
    row["energy"] = r.energy;
    row["a"] = opt_json(r.a);
    row["b"] = opt_json(r.b);
    row["ref_renormalized"] = r.ref_renormalized;
    row["ref_naive"] = opt_json(r.ref_naive);
    row["diff_renormalized"] = opt_json(r.diff_renormalized);
    row["diff_naive"] = opt_json(r.diff_naive);
    row["profile"] = r.profile;
    row["kappa"] = r.kappa;
    row["wall_time"] = r.wall_time;
    rows.push_back(std::move(row));
  }
  if (!summary_json.empty())
    doc["summary"] = nlohmann::ordered_json::parse(summary_json);
  atomic_write(path, doc.dump(2) + "\n");
}

} // namespace shellwave::convergence
