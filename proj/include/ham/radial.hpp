#pragma once

// Integrals of the form int F(|xi + eta|) mu(d xi) for radial Riesz mu.
// In d = 1 the shell is F(|r + eta|) + F(|r - eta|); for d >= 2 the shell is
// an integral over the angle between xi and eta.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ham/covariance.hpp"
#include "ham/quadrature.hpp"

namespace ham {

struct ShellOptions {
  double tail_q = 2.0;     //!< F(rho) ~ tail_lim * rho^{-tail_q}
  double tail_lim = 1.0;
  double period = 0.0;     //!< > 0 when F oscillates with this period in rho
  double cutoff = 0.0;     //!< start of the averaged tail for oscillatory F; 0 = auto
  double rel_tol = 1e-10;
};

namespace detail {

template <class F>
double shell_value(const SpatialMeasure& mu, double eta, double r, F&& f, double tol) {
  const int d = mu.dim();
  if (d == 1) return f(std::abs(r + eta)) + f(std::abs(r - eta));
  if (eta == 0.0) return sphere_area(d) * f(r);
  auto g = [&](double th) {
    double c = std::cos(th);
    double rho2 = r * r + eta * eta + 2.0 * r * eta * c;
    double w = d == 2 ? 1.0 : std::pow(std::sin(th), d - 2);
    return w * f(std::sqrt(std::max(rho2, 0.0)));
  };
  // Break the angle where the shifted radius is smallest (theta = pi).
  double v = quad::gk(g, 0.0, std::numbers::pi, tol, 14).value;
  return sphere_area(d - 1) * v;
}

}  // namespace detail

/*!
 * int F(|xi + eta|) mu(d xi) where |eta| = eta.
 *
 * For oscillatory F the tail beyond the cutoff uses fbar, the oscillation
 * average of F; the dropped remainder is of order cutoff^{alpha-3}/period.
 */
template <class F, class Fbar>
quad::Result shifted_radial(const SpatialMeasure& mu, double eta, F&& f, Fbar&& fbar,
                            const ShellOptions& opt) {
  const double a = mu.alpha();
  const double tol = opt.rel_tol;
  const double inner_tol = std::min(1e-11, tol * 0.1);
  auto shell = [&](double r) { return detail::shell_value(mu, eta, r, f, inner_tol); };
  auto shell_bar = [&](double r) { return detail::shell_value(mu, eta, r, fbar, inner_tol); };
  const double lim = sphere_area(mu.dim()) * opt.tail_lim;
  // Middle pieces carry the r^{alpha-1} weight explicitly; head and tail absorb it.
  auto weighted = [&](double r) { return std::pow(r, a - 1.0) * shell(r); };

  quad::Result total;
  if (opt.period <= 0.0) {
    const double b0 = eta > 0.0 ? std::min(1.0, 0.5 * eta) : 1.0;
    const double b1 = 2.0 * (1.0 + eta);
    total += quad::power_head(shell, a, b0, tol);
    total += quad::gk_breaks(weighted, b0, b1, {eta}, tol);
    total += quad::power_tail(shell, a, opt.tail_q, lim, b1, tol);
  } else {
    const double p = opt.period;
    const double b0 = std::min(1.0, p);
    double R = opt.cutoff > 0.0 ? opt.cutoff : std::max(4000.0 * p, 4.0 * (1.0 + eta));
    R = std::max(R, b0 + p);
    total += quad::power_head(shell, a, b0, tol);
    total += quad::panels(weighted, b0, R, p, tol);
    total += quad::power_tail(shell_bar, a, opt.tail_q, lim, R, tol);
  }
  return quad::settle(total, tol).scaled(mu.constant());
}

template <class F>
quad::Result shifted_radial(const SpatialMeasure& mu, double eta, F&& f,
                            const ShellOptions& opt) {
  return shifted_radial(mu, eta, f, f, opt);
}

}  // namespace ham
