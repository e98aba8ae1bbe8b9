#include "ham/increments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ham/errors.hpp"
#include "ham/parallel.hpp"
#include "ham/radial.hpp"
#include "ham/wave_kernel.hpp"

namespace ham {

namespace {
constexpr double kPi = std::numbers::pi;

//! kappa with int_0^inf r^{alpha-3} (1 - cos(x r)) dr = kappa |x|^{2-alpha}.
double mellin_kappa(double alpha) {
  return kPi / (2.0 * boost::math::tgamma(3.0 - alpha) * std::sin(0.5 * kPi * alpha));
}

double signed_pow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

//! Angular average of cos(xi . z) over the sphere of radius r, with x = r |z|.
double sphere_cos_average(int d, double x) {
  if (d == 1) return std::cos(x);
  if (x < 1e-4) return 1.0 - x * x / (2.0 * d);
  const double nu = 0.5 * d - 1.0;
  return boost::math::tgamma(0.5 * d) * std::pow(2.0 / x, nu) *
         boost::math::cyl_bessel_j(nu, x);
}

void check_wave_measure(const SpatialMeasure& mu) {
  if (!(mu.alpha() < 2.0)) throw ModelError("dalang integral is infinite for alpha >= 2");
}

// int_0^{t-w} FG(v+w, r) FG(v, r) dv for w in [0, t].
double pair_time_integral(double t, double w, double r) {
  if (r * t < 0.1) {
    return quad::gk15_fixed(
        [&](double v) { return wave_fourier(v + w, r) * wave_fourier(v, r); }, 0.0, t - w);
  }
  return ((t - w) * std::cos(w * r) - std::cos(t * r) * std::sin((t - w) * r) / r) /
         (2.0 * r * r);
}

quad::Result space_increment_d1(double t, double z, const SpatialMeasure& mu,
                                const TemporalCovariance& g, double tol) {
  const double p = 2.0 - mu.alpha();
  auto lambda = [&](double x) {
    return std::pow(std::abs(x + z), p) + std::pow(std::abs(x - z), p) -
           2.0 * std::pow(std::abs(x), p);
  };
  auto big_lambda = [&](double y) {
    return (signed_pow(y + z, p + 1.0) + signed_pow(y - z, p + 1.0) -
            2.0 * signed_pow(y, p + 1.0)) /
           (p + 1.0);
  };
  auto psi = [&](double w) {
    w = std::abs(w);
    return (t - w) * lambda(w) - 0.5 * (big_lambda(2.0 * t - w) - big_lambda(w));
  };
  const double c = std::pow(2.0 * kPi, -1.0) * mu.radial_weight() * 0.5 * mellin_kappa(mu.alpha());
  return integrate_against_gamma(g, t, psi, {z, 2.0 * t - z}, tol).scaled(c);
}

quad::Result space_increment_radial(double t, double z, const SpatialMeasure& mu,
                                    const TemporalCovariance& g, double tol) {
  const int d = mu.dim();
  const double a = mu.alpha();
  auto K = [&](double r) {
    return integrate_against_gamma(
               g, t, [&](double w) { return pair_time_integral(t, std::abs(w), r); }, tol)
        .value;
  };
  auto f = [&](double r) { return K(r) * 2.0 * (1.0 - sphere_cos_average(d, r * z)); };
  const double R = 200.0 / t;
  const double width = std::min(kPi / t, kPi / z);
  const double b0 = std::min(width, 1.0);
  quad::Result total = quad::power_head(f, a, b0, tol);
  total += quad::panels([&](double r) { return std::pow(r, a - 1.0) * f(r); }, b0, R, width, tol);
  // Beyond R: K(r) ~ t nu(r) / (2 r^2) and the angular factor averages to 2.
  const double q = g.kind() == TemporalCovariance::Kind::fractional ? 2.0 * g.parameter() - 1.0
                                                                    : 2.0;
  const double lim = g.kind() == TemporalCovariance::Kind::fractional ? g.nu_constant()
                                                                      : 2.0 * g.parameter();
  total += quad::power_tail([&](double r) { return g.nu_density(r); }, a - 2.0, q, lim, R, tol)
               .scaled(t);
  return total.scaled(std::pow(2.0 * kPi, -d) * mu.radial_weight());
}
}  // namespace

quad::Result time_increment_moment(double t, double h, const SpatialMeasure& mu,
                                   const TemporalCovariance& gamma, double rel_tol) {
  check_wave_measure(mu);
  if (t < 0.0 || t + h < 0.0) throw ModelError("time increment requires t >= 0 and t + h >= 0");
  if (h == 0.0) return {};
  if (h < 0.0) return time_increment_moment(t + h, -h, mu, gamma, rel_tol);
  const double T = t + h;
  const double p = 2.0 - mu.alpha();

  // Cross moment E v(T1) v(T2) as an integral over the gap w = t_1 - s_1;
  // the inner integral over s_1 is closed form.
  auto P = [p](double T1, double T2, double w) {
    const double lo = std::max(0.0, -w), hi = std::min(T2, T1 - w);
    if (!(hi > lo)) return 0.0;
    const double A = T1 + T2 - w;
    const double D = std::abs(T1 - T2 - w);
    return (std::pow(A - 2.0 * lo, p + 1.0) - std::pow(A - 2.0 * hi, p + 1.0)) / (2.0 * (p + 1.0)) -
           std::pow(D, p) * (hi - lo);
  };
  auto f = [&](double w) { return P(T, T, w) + P(t, t, w) - 2.0 * P(T, t, w); };
  const double c = std::pow(2.0 * kPi, -mu.dim()) * mu.radial_weight() * 0.5 *
                   mellin_kappa(mu.alpha());
  auto r = integrate_against_gamma(gamma, T, f, {t, h}, rel_tol, 18).scaled(c);
  r.value = std::max(r.value, 0.0);
  return r;
}

quad::Result space_increment_moment(double t, const std::vector<double>& z,
                                    const SpatialMeasure& mu, const TemporalCovariance& gamma,
                                    double rel_tol) {
  check_wave_measure(mu);
  if (t < 0.0) throw ModelError("space increment requires t >= 0");
  if (static_cast<int>(z.size()) != mu.dim())
    throw ModelError("space shift dimension does not match the spatial dimension");
  const double zn = euclidean_norm(z);
  if (zn == 0.0 || t == 0.0) return {};
  auto r = mu.dim() == 1 ? space_increment_d1(t, zn, mu, gamma, rel_tol)
                         : space_increment_radial(t, zn, mu, gamma, rel_tol);
  r.value = std::max(r.value, 0.0);
  return r;
}

HolderFit holder_fit(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 4) throw ModelError("holder_fit needs at least 4 points");
  HolderFit fit;
  double sx = 0.0, sy = 0.0;
  for (auto [s, m] : pairs) {
    if (!(s > 0.0) || !(m > 0.0))
      throw ModelError("holder_fit needs strictly positive scales and moments");
    fit.scales.push_back(s);
    fit.moments.push_back(m);
    sx += std::log(s);
    sy += std::log(m);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [s, m] : pairs) {
    double dx = std::log(s) - mx, dy = std::log(m) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ModelError("holder_fit needs at least two distinct scales");
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

quad::Result h3_lhs(const SpatialMeasure& mu, double t, double h, double eta_norm) {
  check_wave_measure(mu);
  if (h == 0.0) return {};
  const double T = std::max(t, t + h), lo = std::min(t, t + h);
  if (lo < 0.0) throw ModelError("h3_lhs requires t >= 0 and t + h >= 0");
  auto f = [&](double rho) {
    double v = wave_fourier(T, rho) - wave_fourier(lo, rho);
    return v * v;
  };
  auto fbar = [&](double rho) {
    double x = std::max(rho, 1.0 / T);
    return 1.0 / (x * x);
  };
  ShellOptions opt;
  opt.tail_q = 2.0;
  opt.tail_lim = 1.0;
  opt.period = kPi / T;
  // Shells in d >= 2 cost an angular quadrature each, so the averaged tail starts earlier.
  const double reach = mu.dim() == 1 ? 400.0 : 40.0;
  opt.cutoff = std::max({4000.0 * opt.period, reach / std::abs(h), 4.0 * (1.0 + eta_norm)});
  opt.rel_tol = 1e-9;
  return shifted_radial(mu, eta_norm, f, fbar, opt);
}

quad::Result h4_lhs(const SpatialMeasure& mu, double t, double eta_norm) {
  auto s = shifted_wave_energy(mu, t, eta_norm);
  return {s.value, s.error, s.converged};
}

quad::Result h5_lhs(const SpatialMeasure& mu, double t, double z_norm, double eta_norm) {
  check_wave_measure(mu);
  if (z_norm == 0.0 || t == 0.0) return {};
  if (mu.dim() > 1 && eta_norm != 0.0)
    throw ModelError("h5_lhs supports only eta = 0 when d >= 2");
  const int d = mu.dim();
  auto f = [&](double rho) {
    double g = wave_fourier(t, rho);
    return g * g * 2.0 * (1.0 - sphere_cos_average(d, rho * z_norm));
  };
  auto fbar = [&](double rho) {
    double x = std::max(rho, 1.0 / t);
    return 1.0 / (x * x);
  };
  ShellOptions opt;
  opt.tail_q = 2.0;
  opt.tail_lim = 1.0;
  opt.period = std::min(kPi / t, kPi / z_norm);
  opt.cutoff = std::max({4000.0 * opt.period, 400.0 / z_norm, 4.0 * (1.0 + eta_norm)});
  opt.rel_tol = 1e-9;
  if (d == 1) return shifted_radial(mu, eta_norm, f, fbar, opt);
  // eta = 0: the shell is radial after averaging over directions of xi.
  return shifted_radial(mu, 0.0, f, fbar, opt);
}

namespace {
InequalityCheck summarize(std::string name, const std::vector<double>& scales,
                          const std::vector<std::vector<quad::Result>>& values, double pred) {
  InequalityCheck c;
  c.name = std::move(name);
  c.predicted = pred;
  c.scales = scales;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    double sup = 0.0;
    for (const auto& r : values[i]) {
      sup = std::max(sup, r.value);
      c.converged = c.converged && r.converged;
    }
    c.sup_lhs.push_back(sup);
    if (scales[i] > 0.0 && sup > 0.0) {
      pairs.emplace_back(scales[i], sup);
      c.constant = std::max(c.constant, sup / std::pow(scales[i], pred));
    }
  }
  for (std::size_t i = 0; i < scales.size(); ++i)
    for (const auto& r : values[i])
      if (!(r.value <= 1.05 * c.constant * std::pow(scales[i], pred))) ++c.violations;
  if (pairs.size() >= 4) {
    c.slope = holder_fit(pairs).exponent;
    c.slope_ok = c.slope >= pred - 0.1;
  }
  return c;
}
}  // namespace

IncrementBoundReport h3_h4_h5_verify(const SpatialMeasure& mu, double beta,
                                  const IncrementGrids& grids) {
  if (!(beta > 0.0 && beta < 1.0)) throw ModelError("beta must lie in (0, 1)");
  if (!holder_integral(mu, beta).finite)
    throw ModelError("holder integral diverges: need beta > alpha / 2");
  if (grids.t_grid.empty() || grids.eta_grid.empty())
    throw ModelError("h3_h4_h5_verify needs non-empty t and eta grids");
  const double pred = 2.0 - 2.0 * beta;
  const std::size_t nt = grids.t_grid.size();
  std::vector<double> etas5 = grids.eta_grid;
  if (mu.dim() > 1) etas5 = {0.0};
  const std::size_t ne = grids.eta_grid.size(), ne5 = etas5.size();

  IncrementBoundReport rep;
  rep.beta = beta;

  std::vector<std::vector<quad::Result>> v3(grids.h_grid.size(),
                                            std::vector<quad::Result>(nt * ne));
  parallel_for_index(grids.h_grid.size() * nt * ne, [&](std::size_t k) {
    std::size_t i = k / (nt * ne), j = (k / ne) % nt, e = k % ne;
    v3[i][j * ne + e] = h3_lhs(mu, grids.t_grid[j], grids.h_grid[i], grids.eta_grid[e]);
  });
  rep.h3 = summarize("H3", grids.h_grid, v3, pred);

  std::vector<std::vector<quad::Result>> v4(nt, std::vector<quad::Result>(ne));
  parallel_for_index(nt * ne, [&](std::size_t k) {
    v4[k / ne][k % ne] = h4_lhs(mu, grids.t_grid[k / ne], grids.eta_grid[k % ne]);
  });
  rep.h4 = summarize("H4", grids.t_grid, v4, pred);

  std::vector<std::vector<quad::Result>> v5(grids.z_grid.size(),
                                            std::vector<quad::Result>(nt * ne5));
  parallel_for_index(grids.z_grid.size() * nt * ne5, [&](std::size_t k) {
    std::size_t i = k / (nt * ne5), j = (k / ne5) % nt, e = k % ne5;
    v5[i][j * ne5 + e] = h5_lhs(mu, grids.t_grid[j], grids.z_grid[i], etas5[e]);
  });
  rep.h5 = summarize("H5", grids.z_grid, v5, pred);
  return rep;
}

BoundAB increment_bound_AB(double t, double h, double beta, const SpatialMeasure& mu,
                            const TemporalCovariance& gamma, const IncrementBoundReport& fitted) {
  if (!(beta > 0.0 && beta < 1.0)) throw ModelError("beta must lie in (0, 1)");
  if (std::abs(h) > 1.0) throw ModelError("increment_bound_AB requires |h| <= 1");
  BoundAB out;
  out.C = std::pow(2.0 * kPi, -mu.dim()) * std::max(fitted.h3.constant, fitted.h4.constant);
  const double hp = std::pow(std::abs(h), 2.0 - 2.0 * beta);
  out.A_bound = hp * gamma.gamma_bar(t) * out.C * t;
  out.B_bound = hp * gamma.gamma_bar(t + h) * out.C;
  out.lhs = h == 0.0 ? 0.0 : time_increment_moment(t, h, mu, gamma).value;
  out.slack = 2.0 * (out.A_bound + out.B_bound) - out.lhs;
  out.holds = out.slack >= 0.0;
  return out;
}

}  // namespace ham
