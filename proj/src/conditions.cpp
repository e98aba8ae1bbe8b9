#include "ham/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ham/errors.hpp"
#include "ham/parallel.hpp"
#include "ham/radial.hpp"
#include "ham/wave_kernel.hpp"

namespace ham {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

SpectralIntegral divergent(std::string why) {
  SpectralIntegral s;
  s.value = kInf;
  s.finite = false;
  s.reason = std::move(why);
  return s;
}

SpectralIntegral from_result(const quad::Result& r) {
  SpectralIntegral s;
  s.value = r.value;
  s.error = r.error;
  s.converged = r.converged;
  return s;
}

//! Analytic tail test for int r^{alpha-1} (1 + r^2)^{-beta} dr.
bool beta_tail_diverges(const SpatialMeasure& mu, double beta) {
  return !(2.0 * beta > mu.alpha());
}
}  // namespace

double euclidean_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

SpectralIntegral holder_integral(const SpatialMeasure& mu, double beta) {
  if (!(beta > 0.0)) throw ModelError("holder_integral requires beta > 0");
  if (beta_tail_diverges(mu, beta))
    return divergent("tail exponent alpha - 2 beta = " + std::to_string(mu.alpha() - 2.0 * beta) +
                     " >= 0");
  auto f = [beta](double r) { return std::pow(1.0 + r * r, -beta); };
  auto r = quad::power_halfline(f, mu.alpha(), 2.0 * beta, 1.0, 1.0, 1e-12);
  return from_result(r.scaled(mu.radial_weight()));
}

SpectralIntegral dalang_integral(const SpatialMeasure& mu) { return holder_integral(mu, 1.0); }

SpectralIntegral shifted_beta_integral(const SpatialMeasure& mu, double beta,
                                       const std::vector<double>& eta) {
  if (static_cast<int>(eta.size()) != mu.dim())
    throw ModelError("shift dimension does not match the spatial dimension");
  if (beta_tail_diverges(mu, beta)) return divergent("holder integral diverges for this beta");
  const double e = euclidean_norm(eta);
  auto f = [beta](double rho) { return std::pow(1.0 + rho * rho, -beta); };
  ShellOptions opt;
  opt.tail_q = 2.0 * beta;
  opt.tail_lim = 1.0;
  opt.rel_tol = mu.dim() == 1 ? 1e-11 : 1e-9;
  return from_result(shifted_radial(mu, e, f, opt));
}

PointGrid default_eta_grid(int d) {
  PointGrid g;
  if (d == 1) {
    for (double v : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0}) g.push_back({v});
    return g;
  }
  g.push_back(std::vector<double>(d, 0.0));
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    for (int k = 0; k < 8; ++k) {
      double th = 2.0 * std::numbers::pi * k / 8.0;
      std::vector<double> p(d, 0.0);
      p[0] = r * std::cos(th);
      p[1] = r * std::sin(th);
      g.push_back(p);
    }
  }
  return g;
}

MaxPrincipleReport max_principle_verify(const SpatialMeasure& mu, double beta,
                                        const PointGrid& eta_grid, double rel_tol) {
  MaxPrincipleReport rep;
  rep.rel_tol = rel_tol;
  auto center = shifted_beta_integral(mu, beta, std::vector<double>(mu.dim(), 0.0));
  if (!center.finite) throw ModelError("maximum principle needs a finite holder integral");
  rep.center = center.value;
  rep.values.resize(eta_grid.size());
  parallel_for_index(eta_grid.size(), [&](std::size_t i) {
    rep.values[i] = shifted_beta_integral(mu, beta, eta_grid[i]).value;
  });
  rep.max_excess = -kInf;
  for (double v : rep.values) {
    double excess = (v - rep.center) / rep.center;
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > rel_tol) ++rep.violations;
  }
  if (eta_grid.empty()) rep.max_excess = 0.0;
  return rep;
}

SpectralIntegral shifted_wave_energy(const SpatialMeasure& mu, double t, double eta_norm) {
  if (beta_tail_diverges(mu, 1.0)) return divergent("dalang integral diverges");
  if (t == 0.0) return {};
  auto f = [t](double rho) {
    double g = wave_fourier(t, rho);
    return g * g;
  };
  auto fbar = [t](double rho) {
    double x = std::max(rho, 1.0 / t);
    return 0.5 / (x * x);
  };
  ShellOptions opt;
  opt.tail_q = 2.0;
  opt.tail_lim = 0.5;
  opt.period = std::numbers::pi / t;
  opt.rel_tol = mu.dim() == 1 ? 1e-10 : 1e-8;
  if (mu.dim() > 1) opt.cutoff = std::max(400.0 * opt.period, 4.0 * (1.0 + eta_norm));
  return from_result(shifted_radial(mu, eta_norm, f, fbar, opt));
}

SupBoundReport sup_bound_check(const SpatialMeasure& mu, double t, const PointGrid& eta_grid) {
  if (!(t > 0.0)) throw ModelError("sup_bound_check requires t > 0");
  auto dal = dalang_integral(mu);
  if (!dal.finite) throw ModelError("sup_bound_check needs a finite dalang integral");
  SupBoundReport rep;
  rep.t = t;
  auto w = quad::power_halfline([t](double r) { return 1.0 / (1.0 + t * t * r * r); }, mu.alpha(),
                                2.0, 1.0 / (t * t), 1.0, 1e-12);
  rep.rhs_weighted = 4.0 * t * t * mu.radial_weight() * w.value;
  rep.rhs_dalang = 2.0 * std::max(t * t, 1.0) * dal.value;
  rep.lhs.resize(eta_grid.size());
  parallel_for_index(eta_grid.size(), [&](std::size_t i) {
    rep.lhs[i] = shifted_wave_energy(mu, t, euclidean_norm(eta_grid[i])).value;
  });
  const double rhs = std::min(rep.rhs_weighted, rep.rhs_dalang);
  rep.min_margin = kInf;
  for (double v : rep.lhs) {
    double m = (rhs - v) / rhs;
    rep.min_margin = std::min(rep.min_margin, m);
    if (v > rhs * (1.0 + 1e-9)) ++rep.violations;
  }
  if (eta_grid.empty()) rep.min_margin = 1.0;
  return rep;
}

}  // namespace ham
