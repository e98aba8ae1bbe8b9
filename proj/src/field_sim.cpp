#include "ham/field_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ham/errors.hpp"
#include "ham/parallel.hpp"

namespace ham {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kFeatureStream = 1;
constexpr std::uint64_t kAmplitudeStream = 2;

using cplx = std::complex<double>;

// t e^{ikt/2} sinc(kt/2) = int_0^t e^{iku} du.
cplx phase_integral(double k, double t) {
  double x = 0.5 * k * t;
  double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return t * sinc * std::polar(1.0, x);
}

// M_k = int_0^t e^{i tau u} u^k du for k = 0..5.
void moment_table(double tau, double t, cplx (&M)[6]) {
  const double a = std::abs(tau) * t;
  if (a <= 1.0) {
    for (int k = 0; k < 6; ++k) {
      cplx sum = 0.0;
      cplx term = 1.0;  // (i tau)^j / j!
      for (int j = 0; j < 40; ++j) {
        cplx add = term * std::pow(t, j + k + 1) / double(j + k + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        term *= cplx(0.0, tau) / double(j + 1);
      }
      M[k] = sum;
    }
    return;
  }
  const cplx e = std::polar(1.0, tau * t);
  const cplx inv = 1.0 / cplx(0.0, tau);
  M[0] = (e - 1.0) * inv;
  double tk = 1.0;
  for (int k = 1; k < 6; ++k) {
    tk *= t;
    M[k] = (tk * e - double(k) * M[k - 1]) * inv;
  }
}

double tau_envelope(const TemporalCovariance& g, double t, double R) {
  const double a = 1.0 / t;
  if (R <= a) return t * t * g.nu_mass(R);
  double bulk = t * t * g.nu_mass(a);
  double tail;
  if (g.kind() == TemporalCovariance::Kind::fractional) {
    double H = g.parameter();
    double pa = std::pow(a, -2.0 * H);
    double pr = std::isinf(R) ? 0.0 : std::pow(R, -2.0 * H);
    tail = 2.0 * g.nu_constant() * (pa - pr) / (2.0 * H);
  } else {
    double lam = g.parameter();
    double inv_r = std::isinf(R) ? 0.0 : 1.0 / R;
    double at_r = std::isinf(R) ? 0.5 * kPi : std::atan(R / lam);
    tail = 2.0 * (2.0 / lam) * ((t - inv_r) - (at_r - std::atan(a / lam)) / lam);
  }
  return bulk + tail;
}

double xi_envelope(const SpatialMeasure& mu, double t, double R) {
  const double a = 1.0 / t;
  const double al = mu.alpha();
  const double w = mu.radial_weight();
  if (R <= a) return w * t * t * std::pow(R, al) / al;
  double pr = std::isinf(R) ? 0.0 : std::pow(R, al - 2.0);
  return w * (t * t * std::pow(a, al) / al + (std::pow(a, al - 2.0) - pr) / (2.0 - al));
}

template <class Env>
double share_radius(Env&& env, double share) {
  const double total = env(std::numeric_limits<double>::infinity());
  double lo = 1e-12, hi = 1.0;
  while (env(hi) < share * total) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    double mid = std::sqrt(lo * hi);
    if (env(mid) < share * total)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

struct Feature {
  std::vector<double> xi;
  double m = 0.0;
  double tau = 0.0;
  double weight = 0.0;  // nu mu / q
};

class FeatureSampler {
 public:
  FeatureSampler(const SpatialMeasure& mu, const TemporalCovariance& g, const Truncation& tr)
      : mu_(mu), g_(g), t_(tr.t_ref), T_(tr.tau_max), X_(tr.xi_max) {
    a_ = 1.0 / t_;
    xi_total_ = xi_envelope(mu, t_, X_);
    p_bulk_ = xi_envelope(mu, t_, std::min(a_, X_)) / xi_total_;
    nu_total_ = g.nu_mass(T_);
  }

  // um picks the radius through the inverse CDF of the radial proposal; ut
  // picks the tau component, its sign and its value.
  Feature draw(Rng& rng, double um, double ut) const {
    Feature f;
    const double al = mu_.alpha();
    double r;
    if (X_ <= a_ || um < p_bulk_) {
      double u = X_ <= a_ ? um : um / p_bulk_;
      r = std::min(a_, X_) * std::pow(u, 1.0 / al);
    } else {
      double u = (um - p_bulk_) / (1.0 - p_bulk_);
      double lo = std::pow(a_, al - 2.0), hi = std::pow(X_, al - 2.0);
      r = std::pow(lo - u * (lo - hi), 1.0 / (al - 2.0));
    }
    f.m = r;
    f.xi = direction(rng, mu_.dim());
    for (double& c : f.xi) c *= r;

    const bool from_nu = ut < 0.5;
    const double v = from_nu ? 2.0 * ut : 2.0 * ut - 1.0;
    const bool negative = v < 0.5;
    const double w = negative ? 2.0 * v : 2.0 * v - 1.0;
    if (from_nu) {
      f.tau = g_.nu_radius_quantile(w, T_);
      if (negative) f.tau = -f.tau;
    } else {
      double c = negative ? -r : r;
      double s = 1.0 / t_;
      double lo = std::atan((-T_ - c) / s), hi = std::atan((T_ - c) / s);
      f.tau = c + s * std::tan(lo + w * (hi - lo));
      f.tau = std::clamp(f.tau, -T_, T_);
    }

    double env = std::min(t_ * t_, 1.0 / (r * r));
    f.weight = tau_ratio(f.tau, r) * xi_total_ / env;
    return f;
  }

 private:
  static std::vector<double> direction(Rng& rng, int d) {
    if (d == 1) return {uniform01(rng) < 0.5 ? -1.0 : 1.0};
    std::vector<double> v(d);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < d; i += 2) {
        double u1 = uniform01(rng), u2 = uniform01(rng);
        double rad = std::sqrt(-2.0 * std::log(u1));
        v[i] = rad * std::cos(2.0 * kPi * u2);
        if (i + 1 < d) v[i + 1] = rad * std::sin(2.0 * kPi * u2);
      }
      for (double c : v) n2 += c * c;
    } while (n2 == 0.0);
    double inv = 1.0 / std::sqrt(n2);
    for (double& c : v) c *= inv;
    return v;
  }

  double cauchy_density(double tau, double c) const {
    double s = 1.0 / t_;
    double z = (std::atan((T_ - c) / s) - std::atan((-T_ - c) / s)) / kPi;
    double u = (tau - c) / s;
    return 1.0 / (kPi * s * (1.0 + u * u) * z);
  }

  // nu(tau) / q(tau | m).
  double tau_ratio(double tau, double m) const {
    double nu = g_.nu_density(tau);
    if (std::isinf(nu)) return 2.0 * nu_total_;
    double q = 0.5 * nu / nu_total_ + 0.25 * (cauchy_density(tau, m) + cauchy_density(tau, -m));
    return nu / q;
  }

  const SpatialMeasure& mu_;
  const TemporalCovariance& g_;
  double t_, T_, X_, a_;
  double xi_total_ = 0.0, p_bulk_ = 0.0, nu_total_ = 0.0;
};

double gaussian(Rng& rng, double& spare, bool& has_spare) {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  double u1 = uniform01(rng), u2 = uniform01(rng);
  double rad = std::sqrt(-2.0 * std::log(u1));
  spare = rad * std::sin(2.0 * kPi * u2);
  has_spare = true;
  return rad * std::cos(2.0 * kPi * u2);
}

void validate(const SpatialMeasure& mu, const FieldSpec& spec) {
  if (spec.times.empty()) throw ModelError("field simulation needs at least one time");
  for (std::size_t i = 0; i < spec.times.size(); ++i) {
    double t = spec.times[i];
    if (!(t >= 0.0) || !std::isfinite(t)) throw ModelError("times must be finite and >= 0");
    if (i > 0 && !(t > spec.times[i - 1])) throw ModelError("times must be strictly increasing");
  }
  if (spec.sites.empty()) throw ModelError("field simulation needs at least one site");
  for (const auto& s : spec.sites) {
    if (static_cast<int>(s.size()) != mu.dim())
      throw ModelError("site dimension does not match the spatial measure");
    for (double c : s)
      if (!std::isfinite(c)) throw ModelError("site coordinates must be finite");
  }
  if (spec.n_features < 1) throw ModelError("n_features must be >= 1");
  if (spec.n_replicates < 2) throw ModelError("n_replicates must be >= 2");
  if (spec.tau_max < 0.0 || spec.xi_max < 0.0)
    throw ModelError("truncation radii must be >= 0");
}

}  // namespace

cplx time_factor(double t, double tau, double m) {
  if (t <= 0.0) return 0.0;
  m = std::abs(m);
  const cplx rot = std::polar(1.0, -tau * t);
  if (m * t < 1e-3) {
    cplx M[6];
    moment_table(tau, t, M);
    double m2 = m * m;
    return rot * (M[1] - m2 * M[3] / 6.0 + m2 * m2 * M[5] / 120.0);
  }
  cplx diff = phase_integral(tau + m, t) - phase_integral(tau - m, t);
  return rot * diff / cplx(0.0, 2.0 * m);
}

Truncation truncation_for(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t,
                          double tau_max, double xi_max) {
  Truncation tr;
  tr.t_ref = t;
  tr.tau_max = tau_max;
  tr.xi_max = xi_max;
  const double inf = std::numeric_limits<double>::infinity();
  tr.tau_mass_fraction = tau_envelope(gamma, t, tau_max) / tau_envelope(gamma, t, inf);
  tr.xi_mass_fraction = xi_envelope(mu, t, xi_max) / xi_envelope(mu, t, inf);
  return tr;
}

Truncation default_truncation(const SpatialMeasure& mu, const TemporalCovariance& gamma,
                              double t, double share) {
  if (!(t > 0.0)) throw ModelError("truncation horizon must be > 0");
  double T = share_radius([&](double R) { return tau_envelope(gamma, t, R); }, share);
  double X = share_radius([&](double R) { return xi_envelope(mu, t, R); }, share);
  return truncation_for(mu, gamma, t, T, X);
}

FieldGrid simulate_field(const SpatialMeasure& mu, const TemporalCovariance& gamma,
                         const FieldSpec& spec) {
  validate(mu, spec);
  FieldGrid out;
  out.times = spec.times;
  out.sites = spec.sites;
  out.n_replicates = spec.n_replicates;
  out.n_features = spec.n_features;
  out.seed = spec.seed;
  const std::size_t nt = spec.times.size(), ns = spec.sites.size();
  const std::size_t cells = nt * ns;
  out.values.assign(spec.n_replicates * cells, 0.0);
  out.feature_variance.assign(cells, 0.0);

  const double t_ref = spec.times.back();
  if (t_ref == 0.0) return out;

  // User radii must reach kShare; the defaults go further because small-scale
  // increments live in the outer spectral shells.
  constexpr double kShare = 0.99;
  constexpr double kDefaultShare = 0.9999;
  Truncation tr = default_truncation(mu, gamma, t_ref, kDefaultShare);
  if (spec.tau_max > 0.0 || spec.xi_max > 0.0) {
    double T = spec.tau_max > 0.0 ? spec.tau_max : tr.tau_max;
    double X = spec.xi_max > 0.0 ? spec.xi_max : tr.xi_max;
    Truncation given = truncation_for(mu, gamma, t_ref, T, X);
    if (given.tau_mass_fraction < kShare || given.xi_mass_fraction < kShare) {
      Truncation need = default_truncation(mu, gamma, t_ref, kShare);
      std::ostringstream msg;
      msg.precision(6);
      msg << "truncation radii capture too little spectral mass (tau " << given.tau_mass_fraction
          << ", xi " << given.xi_mass_fraction << "); need tau_max >= " << need.tau_max
          << " and xi_max >= " << need.xi_max;
      throw ModelError(msg.str());
    }
    tr = given;
  }
  out.truncation = tr;

  // Feature table: B[k][cell] = w_k tf(t, tau_k, m_k) e^{i xi_k . x}.
  const std::size_t P = spec.n_features;
  const int d = mu.dim();
  const double norm = std::pow(2.0 * kPi, -(d + 1)) / (2.0 * double(P));
  std::vector<cplx> B(P * cells);
  {
    FeatureSampler sampler(mu, gamma, tr);
    Rng rng(stream_seed(spec.seed, kFeatureStream));
    // Jittered A x B grid over the (radius, tau) uniforms; leftovers are plain draws.
    const std::size_t A = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(P))));
    const std::size_t Bn = P / A;
    for (std::size_t k = 0; k < P; ++k) {
      double um = uniform01(rng), ut = uniform01(rng);
      if (k < A * Bn) {
        um = (double(k % A) + um) / double(A);
        ut = (double(k / A) + ut) / double(Bn);
      }
      Feature f = sampler.draw(rng, um, ut);
      double w = std::sqrt(norm * f.weight);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        cplx tf = w * time_factor(spec.times[ti], f.tau, f.m);
        for (std::size_t si = 0; si < ns; ++si) {
          double phase = 0.0;
          for (int c = 0; c < d; ++c) phase += f.xi[c] * spec.sites[si][c];
          cplx b = tf * std::polar(1.0, phase);
          B[k * cells + ti * ns + si] = b;
          out.feature_variance[ti * ns + si] += 2.0 * std::norm(b);
        }
      }
    }
  }

  parallel_for_index(spec.n_replicates, [&](std::size_t r) {
    Rng rng(stream_seed(spec.seed, kAmplitudeStream, r));
    double spare = 0.0;
    bool has_spare = false;
    double* v = out.values.data() + r * cells;
    for (std::size_t k = 0; k < P; ++k) {
      double g1 = gaussian(rng, spare, has_spare);
      double g2 = gaussian(rng, spare, has_spare);
      // 2 Re(a b) with a = (g1 + i g2) / sqrt(2).
      const cplx* b = B.data() + k * cells;
      for (std::size_t c = 0; c < cells; ++c)
        v[c] += std::numbers::sqrt2 * (g1 * b[c].real() - g2 * b[c].imag());
    }
  });
  return out;
}

std::vector<CovarianceEntry> empirical_covariance(
    const FieldGrid& grid, const std::vector<std::pair<GridPoint, GridPoint>>& pairs) {
  const std::size_t R = grid.n_replicates;
  if (R < 2) throw ModelError("covariance needs at least two replicates");
  auto check = [&](const GridPoint& p) {
    if (p.time_index >= grid.times.size() || p.site_index >= grid.sites.size())
      throw ModelError("grid point index out of range");
  };
  std::vector<CovarianceEntry> out;
  out.reserve(pairs.size());
  for (const auto& [p, q] : pairs) {
    check(p);
    check(q);
    double sx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      double x = grid.at(r, p.time_index, p.site_index);
      double y = grid.at(r, q.time_index, q.site_index);
      sx += x;
      sy += y;
      sxy += x * y;
    }
    const double n = double(R);
    CovarianceEntry e;
    e.value = (sxy - sx * sy / n) / (n - 1.0);
    if (R < 3) {
      e.std_error = std::numeric_limits<double>::infinity();
    } else {
      std::vector<double> loo(R);
      double mean = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        double x = grid.at(r, p.time_index, p.site_index);
        double y = grid.at(r, q.time_index, q.site_index);
        double ax = sx - x, ay = sy - y, axy = sxy - x * y;
        loo[r] = (axy - ax * ay / (n - 1.0)) / (n - 2.0);
        mean += loo[r];
      }
      mean /= n;
      double ss = 0.0;
      for (double c : loo) ss += (c - mean) * (c - mean);
      e.std_error = std::sqrt((n - 1.0) / n * ss);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<IncrementSample> increment_samples(const FieldGrid& grid, IncrementMode mode,
                                               const std::vector<double>& shifts,
                                               std::size_t base_time_index) {
  const std::size_t R = grid.n_replicates;
  if (R < 2) throw ModelError("increments need at least two replicates");
  if (base_time_index >= grid.times.size()) throw ModelError("base time index out of range");
  const std::size_t ns = grid.sites.size();
  std::vector<IncrementSample> out;
  for (double s : shifts) {
    if (!std::isfinite(s)) throw ModelError("increment shift must be finite");
    // (time, site) pairs (a, b) whose difference is sampled.
    std::vector<std::pair<GridPoint, GridPoint>> links;
    if (mode == IncrementMode::time) {
      double target = grid.times[base_time_index] + s;
      std::size_t hit = grid.times.size();
      for (std::size_t i = 0; i < grid.times.size(); ++i)
        if (std::abs(grid.times[i] - target) <= 1e-9 * std::max(1.0, std::abs(target))) hit = i;
      if (hit == grid.times.size()) throw ModelError("shifted time is not on the grid");
      for (std::size_t si = 0; si < ns; ++si)
        links.push_back({{base_time_index, si}, {hit, si}});
    } else {
      for (std::size_t si = 0; si < ns; ++si) {
        const auto& x = grid.sites[si];
        for (std::size_t sj = 0; sj < ns; ++sj) {
          const auto& y = grid.sites[sj];
          double err = std::abs(y[0] - x[0] - s);
          for (std::size_t c = 1; c < x.size(); ++c) err += std::abs(y[c] - x[c]);
          if (err <= 1e-9 * std::max(1.0, std::abs(x[0]) + std::abs(s))) {
            links.push_back({{base_time_index, si}, {base_time_index, sj}});
            break;
          }
        }
      }
      if (links.empty()) throw ModelError("no site pair on the grid matches the space shift");
    }
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      double acc = 0.0;
      for (const auto& [a, b] : links) {
        double diff = grid.at(r, b.time_index, b.site_index) - grid.at(r, a.time_index, a.site_index);
        acc += diff * diff;
      }
      acc /= double(links.size());
      sum += acc;
      sum2 += acc * acc;
    }
    const double n = double(R);
    IncrementSample e;
    e.scale = std::abs(s);
    e.moment = sum / n;
    double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
    e.std_error = std::sqrt(var / n);
    out.push_back(e);
  }
  return out;
}

}  // namespace ham
