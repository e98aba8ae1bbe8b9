#include "ham/chaos_moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ham/errors.hpp"
#include "ham/parallel.hpp"

namespace ham {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed probe point for the phase factor; any x gives the same moment.
constexpr std::array<double, 4> kProbeX{0.37, -1.21, 0.58, 2.03};

void require_dalang(const SpatialMeasure& mu) {
  if (!(mu.alpha() < 2.0)) throw ModelError("dalang integral is infinite for alpha >= 2");
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

//! Running mean and sum of squared deviations (Welford / Chan merge).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double imag_sum = 0.0;

  void add(double x, double imag) {
    count += 1.0;
    double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
    abs_sum += std::abs(x);
    sq_sum += x * x;
    imag_sum += imag;
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    double n = count + o.count;
    double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * count * o.count / n;
    count = n;
    abs_sum += o.abs_sum;
    sq_sum += o.sq_sum;
    imag_sum += o.imag_sum;
  }
};

//! Two-stratum radial law on R^d: mu restricted to the ball of radius N
//! with probability p_bulk, |xi|^{-2} mu outside it otherwise.
struct RadialLaw {
  int d;
  double alpha;
  double N;
  double p_bulk;
  double log_bulk;  // log(p_bulk / D_N)
  double log_tail;  // log((1 - p_bulk) / C_N)

  void draw(Rng& rng, std::normal_distribution<double>& normal, double* out) const {
    double r = uniform01(rng) < p_bulk ? N * std::pow(uniform01(rng), 1.0 / alpha)
                                       : N * std::pow(uniform01(rng), -1.0 / (2.0 - alpha));
    if (d == 1) {
      out[0] = uniform01(rng) < 0.5 ? -r : r;
      return;
    }
    double s = 0.0;
    do {
      s = 0.0;
      for (int k = 0; k < d; ++k) {
        out[k] = normal(rng);
        s += out[k] * out[k];
      }
    } while (s == 0.0);
    double scale = r / std::sqrt(s);
    for (int k = 0; k < d; ++k) out[k] *= scale;
  }

  //! log of density / mu-density at a point of radius r.
  double log_ratio(double r) const {
    return r <= N ? log_bulk : log_tail - 2.0 * std::log(r);
  }
};

double radius(const double* x, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

//! Stable argsort of times; ties keep index order.
void time_order(int n, const double* times, std::vector<int>& order) {
  order.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return times[a] < times[b]; });
}

//! Applies the time ordering to times and xis and evaluates the product.
double ordered_product(int n, int d, double t, const double* times, const double* xis,
                       const std::vector<int>& order, std::vector<double>& st,
                       std::vector<double>& sx, double& phase) {
  phase = 0.0;
  for (int k = 0; k < n; ++k) {
    int j = order[k];
    st[k] = times[j];
    for (int c = 0; c < d; ++c) {
      sx[k * d + c] = xis[j * d + c];
      phase += xis[j * d + c] * kProbeX[c % kProbeX.size()];
    }
  }
  return chaos_fourier_product(st, sx, d, t);
}

//! Sum over k of log_ratio(|partial sum k in the given order|) minus the
//! mu log-density of the same partial sums.
double log_partial_ratio(const RadialLaw& law, const SpatialMeasure& mu, int n, int d,
                         const double* xis, const std::vector<int>& order,
                         std::vector<double>& acc) {
  std::fill(acc.begin(), acc.end(), 0.0);
  double l = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < d; ++c) acc[c] += xis[order[k] * d + c];
    double r = radius(acc.data(), d);
    l += law.log_ratio(r) + (mu.alpha() - d) * std::log(r);
  }
  return l;
}

double log_sum_exp3(double a, double b, double c) {
  double m = std::max({a, b, c});
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}
}  // namespace

double chaos_fourier_product(std::span<const double> times, std::span<const double> xis, int d,
                             double t) {
  const std::size_t n = times.size();
  if (d < 1 || xis.size() != n * static_cast<std::size_t>(d))
    throw ModelError("chaos_fourier_product: xis must hold n points of dimension d");
  for (std::size_t k = 0; k < n; ++k) {
    double next = k + 1 < n ? times[k + 1] : t;
    if (!(times[k] >= 0.0) || times[k] > next)
      throw ModelError("chaos_fourier_product: times must be sorted in [0, t]");
  }
  std::vector<double> partial(d, 0.0);
  double prod = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) {
      partial[c] += xis[k * d + c];
      r2 += partial[c] * partial[c];
    }
    double next = k + 1 < n ? times[k + 1] : t;
    prod *= wave_fourier(next - times[k], std::sqrt(r2));
  }
  return prod;
}

std::pair<double, double> cn_dn_split(const SpatialMeasure& mu, double N) {
  require_dalang(mu);
  if (N < 0.0) throw ModelError("cn_dn_split requires N >= 0");
  const double a = mu.alpha();
  const double w = mu.radial_weight();
  if (N == 0.0) return {kInf, 0.0};
  return {w * std::pow(N, a - 2.0) / (2.0 - a), w * std::pow(N, a) / a};
}

double series_ratio(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t,
                    double N) {
  auto [cn, dn] = cn_dn_split(mu, N);
  (void)dn;
  return 8.0 * std::pow(2.0 * kPi, -mu.dim()) * cn * gamma.gamma_bar(t) * t;
}

double auto_split_N(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t,
                    double target) {
  for (int k = -40; k <= 200; ++k) {
    double N = std::ldexp(1.0, k);
    if (series_ratio(mu, gamma, t, N) < target) return N;
  }
  throw NumericalError("no admissible split radius below 2^200");
}

double alpha_upper_bound(int n, double t, const SpatialMeasure& mu,
                         const TemporalCovariance& gamma, double N) {
  if (n < 0) throw ModelError("alpha_upper_bound requires n >= 0");
  if (n == 0) return 1.0;
  if (t == 0.0) return 0.0;
  auto [cn, dn] = cn_dn_split(mu, N);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double term = std::pow(t, n + 2 * k) / std::exp(log_factorial(k));
    if (k > 0) term *= std::pow(dn, k);
    if (n - k > 0) term *= std::pow(cn, n - k);
    sum += term;
  }
  return std::pow(gamma.gamma_bar(t), n) * std::exp(log_factorial(n)) *
         std::pow(2.0 * kPi, -n * mu.dim()) * std::pow(8.0, n) * sum;
}

ChaosMomentEstimate alpha_n_mc(int n, double t, const SpatialMeasure& mu,
                               const TemporalCovariance& gamma, const McConfig& cfg,
                               std::uint64_t seed) {
  require_dalang(mu);
  if (n < 1) throw ModelError("alpha_n_mc requires n >= 1");
  if (t < 0.0) throw ModelError("alpha_n_mc requires t >= 0");
  if (cfg.samples < 2) throw ModelError("alpha_n_mc requires at least 2 samples");

  ChaosMomentEstimate out;
  out.n = n;
  out.t = t;
  out.n_samples = cfg.samples;
  if (t == 0.0) return out;

  const int d = mu.dim();
  // The default proposal split sits where min(t^2, |xi|^{-2}) changes branch.
  const double N = cfg.split_N > 0.0 ? cfg.split_N : 1.0 / t;
  out.split_N = N;
  auto [cn, dn] = cn_dn_split(mu, N);
  const double p_bulk = t * t * dn / (t * t * dn + cn);
  const RadialLaw law{d, mu.alpha(), N, p_bulk, std::log(p_bulk / dn),
                      std::log((1.0 - p_bulk) / cn)};
  const double am = mu.alpha() - d;

  const double gbar = gamma.gamma_bar(t);
  const double norm = std::pow(2.0 * kPi, -n * d);

  // Frequencies come from an equal mixture of three schemes: independent
  // xi_j, or independent partial sums along the t-order or the s-order.
  // Each scheme tames the weight where the integrand concentrates for
  // that ordering.
  std::array<Moments, kMcBatches> batches{};
  parallel_for_index(kMcBatches, [&](std::size_t b) {
    std::uint64_t count = cfg.samples / kMcBatches + (b < cfg.samples % kMcBatches ? 1 : 0);
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(n), b));
    std::normal_distribution<double> normal;
    std::vector<double> tt(n), ss(n), xi(n * d), eta(n * d), st(n), sx(n * d), acc(d);
    std::vector<int> ord_t(n), ord_s(n);
    Moments& m = batches[b];
    for (std::uint64_t i = 0; i < count; ++i) {
      double w = norm;
      for (int j = 0; j < n; ++j) {
        double gap = std::min(gamma.gamma_bar_inverse(uniform01(rng) * gbar), t);
        if (uniform01(rng) < 0.5) gap = -gap;
        double lo = std::max(0.0, -gap), hi = std::min(t, t - gap);
        double s = lo + (hi - lo) * uniform01(rng);
        ss[j] = s;
        tt[j] = std::clamp(s + gap, 0.0, t);
        w *= gbar * (hi - lo);
      }
      time_order(n, tt.data(), ord_t);
      time_order(n, ss.data(), ord_s);

      const double u = uniform01(rng);
      if (u < 1.0 / 3.0) {
        for (int j = 0; j < n; ++j) law.draw(rng, normal, &xi[j * d]);
      } else {
        const auto& ord = u < 2.0 / 3.0 ? ord_t : ord_s;
        for (int k = 0; k < n; ++k) law.draw(rng, normal, &eta[k * d]);
        for (int k = 0; k < n; ++k)
          for (int c = 0; c < d; ++c)
            xi[ord[k] * d + c] = eta[k * d + c] - (k > 0 ? eta[(k - 1) * d + c] : 0.0);
      }

      // log(q / mu) for each scheme, then the mixture weight mu / q.
      double l0 = 0.0, lmu = 0.0;
      for (int j = 0; j < n; ++j) {
        double r = radius(&xi[j * d], d);
        l0 += law.log_ratio(r);
        lmu += am * std::log(r);
      }
      l0 += lmu;
      double l1 = log_partial_ratio(law, mu, n, d, xi.data(), ord_t, acc);
      double l2 = log_partial_ratio(law, mu, n, d, xi.data(), ord_s, acc);
      double lw = lmu - (log_sum_exp3(l0, l1, l2) - std::log(3.0));
      if (!std::isfinite(lw)) {
        m.add(0.0, 0.0);
        continue;
      }
      w *= std::exp(lw);

      double phase_t = 0.0, phase_s = 0.0;
      double ft = ordered_product(n, d, t, tt.data(), xi.data(), ord_t, st, sx, phase_t);
      double fs = ordered_product(n, d, t, ss.data(), xi.data(), ord_s, st, sx, phase_s);
      std::complex<double> z = std::polar(1.0, -phase_t) * std::polar(1.0, phase_s);
      double f = w * ft * fs;
      m.add(f * z.real(), f * z.imag());
    }
  });

  Moments total;
  for (const auto& b : batches) total.merge(b);
  const double cnt = total.count;
  out.estimate = total.mean;
  out.std_error = cnt > 1.0 ? std::sqrt(total.m2 / (cnt - 1.0) / cnt) : 0.0;
  out.imag_residual = total.imag_sum / cnt;
  out.effective_sample_size =
      total.sq_sum > 0.0 ? total.abs_sum * total.abs_sum / total.sq_sum : cnt;
  out.low_ess = out.effective_sample_size < 0.01 * cnt;
  return out;
}

double series_tail(int m, double a, double b) {
  if (!(a < 1.0)) return kInf;
  if (a <= 0.0) return 0.0;
  const double eb = std::exp(b);
  // S_n = sum_{k <= n} b^k / k!, built incrementally.
  double s = 0.0, bk = 1.0;
  for (int k = 0; k <= m; ++k) {
    s += bk;
    bk *= b / (k + 1);
  }
  double total = 0.0;
  double an = std::pow(a, m);
  for (int n = m + 1; n < 100000; ++n) {
    s += bk;
    bk *= b / (n + 1);
    an *= a;
    total += an * s;
    double rest = an * a * eb / (1.0 - a);
    if (rest <= 1e-17 * total || an == 0.0) return total + rest;
  }
  return total + an * a * eb / (1.0 - a);
}

SeriesSummary second_moment_series(double t, const SpatialMeasure& mu,
                                   const TemporalCovariance& gamma, int n_max, double N,
                                   const McConfig& cfg, std::uint64_t seed) {
  require_dalang(mu);
  if (n_max < 0) throw ModelError("second_moment_series requires n_max >= 0");
  if (t < 0.0) throw ModelError("second_moment_series requires t >= 0");
  SeriesSummary out;
  out.t = t;
  out.mu = mu;
  out.gamma = gamma;
  out.terms.assign(n_max + 1, 0.0);
  out.term_errors.assign(n_max + 1, 0.0);
  out.upper_bounds.assign(n_max + 1, 0.0);
  out.terms[0] = 1.0;
  out.upper_bounds[0] = 1.0;
  out.partial_sum = 1.0;

  if (t == 0.0) {
    out.N_split = N > 0.0 ? N : 1.0;
    auto [cn, dn] = cn_dn_split(mu, out.N_split);
    out.C_N = cn;
    out.D_N = dn;
    for (int n = 1; n <= n_max; ++n) {
      ChaosMomentEstimate e;
      e.n = n;
      e.n_samples = cfg.samples;
      out.estimates.push_back(e);
    }
    return out;
  }

  out.N_split = N > 0.0 ? N : auto_split_N(mu, gamma, t);
  const double a = series_ratio(mu, gamma, t, out.N_split);
  if (!(a < 1.0))
    throw ModelError("split radius N = " + std::to_string(out.N_split) +
                     " gives series ratio " + std::to_string(a) +
                     " >= 1; increase N or shorten the horizon");
  auto [cn, dn] = cn_dn_split(mu, out.N_split);
  out.C_N = cn;
  out.D_N = dn;

  for (int n = 1; n <= n_max; ++n) {
    auto e = alpha_n_mc(n, t, mu, gamma, cfg, seed);
    double fact = std::exp(log_factorial(n));
    out.terms[n] = e.estimate / fact;
    out.term_errors[n] = e.std_error / fact;
    out.upper_bounds[n] = alpha_upper_bound(n, t, mu, gamma, out.N_split);
    out.partial_sum += out.terms[n];
    out.estimates.push_back(e);
  }
  out.tail_bound = series_tail(n_max, a, t * t * dn / cn);
  return out;
}

double p_moment_bound(double t, double p, const SeriesSummary& s) {
  if (!(p >= 2.0)) throw ModelError("p_moment_bound requires p >= 2");
  if (t == 0.0) return 1.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < s.terms.size(); ++n)
    sum += std::pow(p - 1.0, 0.5 * n) * std::sqrt(std::max(s.terms[n], 0.0));

  // Tail: sum_{n > m} (p-1)^{n/2} (bound_n / n!)^{1/2} with a fresh split so
  // that (p - 1) a < 1/2.
  const int m = static_cast<int>(s.terms.size()) - 1;
  double N = std::max(s.N_split, 1e-300);
  while ((p - 1.0) * series_ratio(s.mu, s.gamma, t, N) >= 0.5) N *= 2.0;
  const double a = series_ratio(s.mu, s.gamma, t, N);
  auto [cn, dn] = cn_dn_split(s.mu, N);
  const double b = t * t * dn / cn;
  const double q = std::sqrt((p - 1.0) * a);
  double sn = 0.0, bk = 1.0;
  for (int k = 0; k <= m; ++k) {
    sn += bk;
    bk *= b / (k + 1);
  }
  double tail = 0.0, qn = std::pow(q, m);
  const double root_eb = std::exp(0.5 * b);
  for (int n = m + 1; n < 100000; ++n) {
    sn += bk;
    bk *= b / (n + 1);
    qn *= q;
    tail += qn * std::sqrt(sn);
    double rest = qn * q * root_eb / (1.0 - q);
    if (rest <= 1e-17 * tail || qn == 0.0) {
      tail += rest;
      break;
    }
  }
  return sum + tail;
}

double simplex_integral(int n, double t, double h) {
  if (n < 0) throw ModelError("simplex_integral requires n >= 0");
  if (!(h > -1.0)) throw ModelError("simplex_integral requires h > -1");
  if (!(t > 0.0)) throw ModelError("simplex_integral requires t > 0");
  if (n == 0) return 1.0;
  const double e = n * (1.0 + h);
  return std::exp(n * std::lgamma(1.0 + h) - std::lgamma(e + 1.0) + e * std::log(t));
}

namespace {
// W_k(s): density of t_k = s of the weighted simplex measure.
quad::Result simplex_density(int k, double s, double h, double tol) {
  if (k == 1) return {1.0, 0.0, true};
  if (s <= 0.0) return {};
  // int_0^s W_{k-1}(r) (s - r)^h dr with u = (s - r)^{1+h}.
  const double e = 1.0 + h;
  bool ok = true;
  auto f = [&](double u) {
    auto w = simplex_density(k - 1, s - std::pow(u, 1.0 / e), h, tol);
    ok = ok && w.converged;
    return w.value;
  };
  auto r = quad::gk(f, 0.0, std::pow(s, e), tol, 10).scaled(1.0 / e);
  r.converged = r.converged && ok;
  return r;
}
}  // namespace

quad::Result simplex_integral_quadrature(int n, double t, double h, double rel_tol) {
  if (n < 1) return {1.0, 0.0, true};
  if (!(h > -1.0) || !(t > 0.0)) throw ModelError("simplex quadrature requires h > -1, t > 0");
  const double e = 1.0 + h;
  bool ok = true;
  auto f = [&](double u) {
    auto w = simplex_density(n, t - std::pow(u, 1.0 / e), h, rel_tol);
    ok = ok && w.converged;
    return w.value;
  };
  auto r = quad::gk(f, 0.0, std::pow(t, e), rel_tol, 10).scaled(1.0 / e);
  r.converged = r.converged && ok;
  return r;
}

GammaLbReport gamma_lb_check(double a, int n_lo, int n_hi) {
  if (!(a > 1.0)) throw ModelError("gamma_lb_check requires a > 1");
  if (n_lo < 0 || n_hi < n_lo) throw ModelError("gamma_lb_check requires 0 <= n_lo <= n_hi");
  GammaLbReport rep;
  rep.a = a;
  rep.min_ratio = kInf;
  for (int n = n_lo; n <= n_hi; ++n) {
    double r = std::exp(std::lgamma(a * n + 1.0) - a * log_factorial(n));
    rep.n_values.push_back(n);
    rep.ratios.push_back(r);
    if (r < rep.min_ratio) {
      rep.min_ratio = r;
      rep.argmin = n;
    }
  }
  rep.positive = rep.min_ratio > 0.0 && std::isfinite(rep.min_ratio);
  return rep;
}

}  // namespace ham
