// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ham/chaos_moments.hpp"
#include "ham/conditions.hpp"
#include "ham/config.hpp"
#include "ham/covariance.hpp"
#include "ham/dispatch.hpp"
#include "ham/field_sim.hpp"
#include "ham/increments.hpp"
#include "ham/parallel.hpp"
#include "ham/report.hpp"

using namespace ham;

namespace {

const SpatialMeasure golden_mu = SpatialMeasure::riesz(1.0, 1);
const TemporalCovariance golden_gamma = TemporalCovariance::fractional(0.75);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome parseval() {
  auto f = parseval_check(golden_gamma, 0.0, 1.0);
  auto e = parseval_check(TemporalCovariance::exponential(1.0), 0.0, 1.0);
  double r_time = rel(f.time_side, 1.0), r_spec = rel(f.spectral_side, f.time_side);
  double r_exp = rel(e.time_side, 2.0 / std::numbers::e);
  bool ok = r_time <= 1e-6 && r_spec <= 1e-3 && r_exp <= 1e-6;
  return {ok, fmt("fractional time %.9f spectral %.9f (rel %.1e); exponential time rel %.1e",
                  f.time_side, f.spectral_side, r_spec, r_exp)};
}

Outcome dalang() {
  auto a = dalang_integral(golden_mu);
  auto b = dalang_integral(SpatialMeasure::riesz(0.5, 1));
  double ra = rel(a.value, std::numbers::pi);
  double rb = rel(b.value, std::numbers::pi / std::sin(std::numbers::pi / 4.0));
  return {ra <= 1e-7 && rb <= 1e-6, fmt("alpha 1: %.12f (rel %.1e); alpha 0.5: %.12f (rel %.1e)",
                                        a.value, ra, b.value, rb)};
}

Outcome max_principle() {
  auto a = max_principle_verify(SpatialMeasure::riesz(0.5, 1), 1.0, default_eta_grid(1), 1e-6);
  auto b = max_principle_verify(SpatialMeasure::riesz(1.0, 2), 1.0, default_eta_grid(2), 1e-6);
  return {a.violations == 0 && b.violations == 0,
          fmt("violations %zu of %zu (d=1), %zu of %zu (d=2); max excess %.2e, %.2e", a.violations,
              a.values.size(), b.violations, b.values.size(), a.max_excess, b.max_excess)};
}

Outcome simplex() {
  double worst = 0.0;
  for (int n : {1, 2, 3})
    for (double h : {0.0, 0.5, 1.0})
      for (double t : {1.0, 2.0}) {
        double c = simplex_integral(n, t, h);
        double q = simplex_integral_quadrature(n, t, h, 1e-7).value;
        worst = std::max(worst, rel(q, c));
      }
  return {worst <= 1e-4, fmt("max relative gap %.2e over 18 cases", worst)};
}

Outcome chaos_oracle() {
  McConfig mc;
  mc.samples = 1'000'000;
  bool ok = true;
  std::string d;
  std::uint64_t seed = 2024;
  for (int n : {1, 2})
    for (double t : {0.5, 1.0}) {
      auto e = alpha_n_mc(n, t, golden_mu, golden_gamma, mc, seed++);
      double q = alpha_n_quadrature(n, t, golden_mu, golden_gamma).value;
      double z = (e.estimate - q) / e.std_error;
      double ess = e.effective_sample_size / double(e.n_samples);
      ok = ok && std::abs(z) <= 3.0 && ess > 0.05;
      d += fmt("n=%d t=%g z=%+.2f ess=%.3f; ", n, t, z, ess);
    }
  return {ok, d};
}

Outcome bound_chain() {
  McConfig mc;
  mc.samples = 1'000'000;
  bool ok = true;
  std::string d;
  const double t = 1.0;
  const double N = auto_split_N(golden_mu, golden_gamma, t);
  for (int n : {1, 2, 3}) {
    auto e = alpha_n_mc(n, t, golden_mu, golden_gamma, mc, 300 + n);
    double ub = alpha_upper_bound(n, t, golden_mu, golden_gamma, N);
    ok = ok && e.estimate <= ub + 2.0 * e.std_error;
    d += fmt("n=%d %.4g <= %.4g; ", n, e.estimate, ub);
  }
  mc.samples = 200'000;
  auto s4 = second_moment_series(0.5, golden_mu, golden_gamma, 4, 0.0, mc, 77);
  auto s6 = second_moment_series(0.5, golden_mu, golden_gamma, 6, 0.0, mc, 77);
  bool tail = std::isfinite(s4.tail_bound) && s6.partial_sum >= s4.partial_sum &&
              s6.partial_sum <= s4.partial_sum + s4.tail_bound;
  ok = ok && tail;
  d += fmt("t=0.5 series: S4=%.12f S6=%.12f tail4=%.3g", s4.partial_sum, s6.partial_sum,
           s4.tail_bound);
  return {ok, d};
}

Outcome gamma_lb() {
  bool ok = true;
  std::string d;
  for (double a : {1.5, 2.0, 2.5}) {
    auto r = gamma_lb_check(a, 1, 20);
    ok = ok && r.positive && r.min_ratio > 0.2;
    d += fmt("a=%g min %.6f at n=%d; ", a, r.min_ratio, r.argmin);
  }
  return {ok, d};
}

Outcome field_covariance() {
  const double target = alpha_n_quadrature(1, 1.0, golden_mu, golden_gamma).value;
  FieldSpec spec;
  spec.times = {1.0};
  spec.sites = {{0.0}};
  spec.n_replicates = 20000;
  spec.seed = 8;
  auto g = simulate_field(golden_mu, golden_gamma, spec);
  auto c = empirical_covariance(g, {{{0, 0}, {0, 0}}})[0];
  double r = rel(c.value, target);
  bool ok = r <= 0.05;

  // Trend: RMS error of the conditional variance over seeds shrinks at each doubling.
  std::vector<double> rms;
  for (std::size_t P : {1024, 2048, 4096, 8192}) {
    double s2 = 0.0;
    for (std::uint64_t seed = 0; seed < 128; ++seed) {
      FieldSpec s = spec;
      s.n_features = P;
      s.n_replicates = 2;
      s.seed = 5000 + seed;
      double e = simulate_field(golden_mu, golden_gamma, s).feature_variance[0] / target - 1.0;
      s2 += e * e;
    }
    rms.push_back(std::sqrt(s2 / 128.0));
  }
  bool trend = rms[1] < rms[0] && rms[2] < rms[1] && rms[3] < rms[2];
  return {ok && trend,
          fmt("Var %.5f vs %.5f (rel %.2e, se %.1e); rms %.4f %.4f %.4f %.4f at 1k..8k features",
              c.value, target, r, c.std_error, rms[0], rms[1], rms[2], rms[3])};
}

Outcome holder() {
  const std::vector<double> hs{0.05, 0.1, 0.2, 0.4};
  std::vector<std::pair<double, double>> q;
  for (double h : hs) q.emplace_back(h, time_increment_moment(1.0, h, golden_mu, golden_gamma).value);
  const double sq = holder_fit(q).exponent;

  FieldSpec spec;
  spec.times = {1.0, 1.05, 1.1, 1.2, 1.4};
  spec.sites = {{0.0}, {5.0}, {10.0}};
  spec.n_replicates = 4000;
  spec.seed = 9;
  auto g = simulate_field(golden_mu, golden_gamma, spec);
  std::vector<std::pair<double, double>> emp;
  for (const auto& s : increment_samples(g, IncrementMode::time, hs))
    emp.emplace_back(s.scale, s.moment);
  const double se = holder_fit(emp).exponent;
  const double predicted = 2.0 - golden_mu.alpha();
  bool ok = std::abs(sq - predicted) <= 0.15 && std::abs(se - sq) <= 0.2;
  return {ok, fmt("quadrature slope %.4f vs %.1f +- 0.15; field slope %.4f (gap %.3f, allowed 0.2)",
                  sq, predicted, se, std::abs(se - sq))};
}

Outcome determinism() {
  RunConfig m = parse_config(R"({"seed": 42, "moments": {"t": 1, "n_max": 4, "samples": 100000}})");
  RunConfig s = parse_config(
      R"({"seed": 42, "simulate": {"t_grid": [0.5, 1], "x_grid": [0, 0.5, 1], "replicates": 200}})");
  auto render = [&](std::size_t threads) {
    ThreadLimit limit(threads);
    std::ostringstream warn;
    std::string out = render_csv(moments_table(m, warn), resolved_config(m));
    auto sim = simulate_outputs(s);
    out += render_csv(sim.field, resolved_config(s));
    out += render_json(sim.sidecar);
    return out;
  };
  std::string a = render(1), b = render(8);
  return {a == b, fmt("%zu bytes, %s", a.size(), a == b ? "identical" : "differ")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "energy identity", 5, parseval},
      {2, "dalang closed forms", 1, dalang},
      {3, "maximum principle", 30, max_principle},
      {4, "simplex integral", 60, simplex},
      {5, "chaos moment oracle", 300, chaos_oracle},
      {6, "bound chain", 600, bound_chain},
      {7, "gamma inequality", 1, gamma_lb},
      {8, "field covariance", 300, field_covariance},
      {9, "holder exponent", 600, holder},
      {10, "determinism", 120, determinism},
  };
  int failures = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.limit_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2fs of %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
