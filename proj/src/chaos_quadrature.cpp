// Deterministic alpha_1 and alpha_2.
//
// alpha_1: the spectral pairing psi(u, v) = int FG(u) FG(v) mu has a closed
// form for Riesz measures, and so does its integral along the diagonal
// direction, leaving one integral against gamma.
//
// alpha_2 (constant density, d = 1): the two orderings of (s_1, s_2) relative
// to (t_1, t_2) give
//   same:  psi = C^2 min(a_2, b_2) min(a_1, b_1) / 4, reduced analytically to
//          C^2/96 int int gamma(p) gamma(r) R_+^4,
//   cross: psi = C^2 S(a, b, c) / 32 with S from the three-sine integral,
//          integrated over (gap_1, gap_2, p, a).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ham/chaos_moments.hpp"
#include "ham/errors.hpp"

namespace ham {

namespace {
constexpr double kPi = std::numbers::pi;

quad::Result alpha1(double t, const SpatialMeasure& mu, const TemporalCovariance& g,
                    Equation eq, double tol) {
  const double a = mu.alpha();
  const double K = std::pow(2.0 * kPi, -mu.dim()) * mu.radial_weight();
  if (eq == Equation::wave) {
    const double p = 2.0 - a;
    const double kappa = kPi / (2.0 * boost::math::tgamma(3.0 - a) * std::sin(0.5 * kPi * a));
    const double c = 0.5 * K * kappa;
    auto psi = [=](double w) {
      w = std::abs(w);
      return c * ((std::pow(2.0 * t - w, p + 1.0) - std::pow(w, p + 1.0)) / (2.0 * (p + 1.0)) -
                  std::pow(w, p) * (t - w));
    };
    return integrate_against_gamma(g, t, psi, tol);
  }
  const double e = 1.0 - 0.5 * a;
  const double c = 0.5 * K * boost::math::tgamma(0.5 * a) / e;
  auto psi = [=](double w) {
    w = std::abs(w);
    return c * (std::pow(t - 0.5 * w, e) - std::pow(0.5 * w, e));
  };
  return integrate_against_gamma(g, t, psi, tol);
}

double sq_signed(double k) { return k * std::abs(k); }

//! 32 psi / C^2 for the cross ordering.
double cross_kernel(double a, double b, double c) {
  return sq_signed(a + b + c) - sq_signed(a + b - c) - sq_signed(a - b + c) -
         sq_signed(b + c - a);
}

//! Three-point Gauss-Legendre; exact for polynomials up to degree 5.
template <class F>
double gauss3(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 3>::integrate(f, lo, hi);
}

//! int over a of the cross kernel for fixed gaps sigma <= p <= rho.
double cross_a_integral(double t, double sigma, double rho, double p) {
  const double c = std::min(p - sigma, rho - p);
  const double lo = std::max(0.0, -p);
  const double hi = std::min(t - p + sigma, t - rho);
  if (!(hi > lo) || c <= 0.0) return 0.0;
  auto f = [&](double a) { return cross_kernel(a, a + p, c); };
  const double br = 0.5 * (c - p);
  if (br > lo && br < hi) return gauss3(f, lo, br) + gauss3(f, br, hi);
  return gauss3(f, lo, hi);
}

//! int_sigma^rho dp of cross_a_integral. Between the break points the
//! integrand is a cubic in p, so the rule below is exact.
double cross_p_integral(double t, double sigma, double rho) {
  std::array<double, 13> br{sigma,           rho,        0.0,         0.5 * (sigma + rho),
                            sigma + rho,     t + sigma,  rho - t,     0.5 * sigma,
                            t + 1.5 * sigma, 0.5 * rho,  1.5 * rho - t, 0.0, 0.0};
  std::sort(br.begin(), br.end());
  double total = 0.0;
  double lo = sigma;
  auto f = [&](double p) { return cross_a_integral(t, sigma, rho, p); };
  for (double x : br) {
    if (x <= lo) continue;
    if (x >= rho) break;
    total += gauss3(f, lo, x);
    lo = x;
  }
  return total + gauss3(f, lo, rho);
}

quad::Result alpha2_constant_density(double t, const SpatialMeasure& mu,
                                     const TemporalCovariance& g, double tol) {
  // Inner integrals vanish near the support edges, where a relative error
  // test is meaningless; the outer error estimates absorb their noise.
  const double C2 = mu.constant() * mu.constant();

  // Same ordering.
  auto same_inner = [&](double p) {
    auto f = [&](double r) {
      double R = t - std::max(0.0, r) - std::max(0.0, -p) - std::max(0.0, p - r);
      return R > 0.0 ? R * R * R * R : 0.0;
    };
    return integrate_against_gamma(g, t, f, {p}, tol).value;
  };
  auto same = integrate_against_gamma(g, t, same_inner, {}, tol).scaled(C2 / 96.0);

  // Cross ordering, gaps sigma = t_1 - s_1 <= rho = t_2 - s_2.
  auto cross_inner = [&](double sigma) {
    auto f = [&](double rho) {
      if (rho <= sigma) return 0.0;
      return cross_p_integral(t, sigma, rho);
    };
    return integrate_against_gamma(g, t, f, {sigma}, tol).value;
  };
  auto cross = integrate_against_gamma(g, t, cross_inner, {}, tol).scaled(C2 / 32.0);

  quad::Result total = same;
  total += cross;
  return total.scaled(2.0);
}
}  // namespace

quad::Result alpha_n_quadrature(int n, double t, const SpatialMeasure& mu,
                                const TemporalCovariance& gamma, Equation eq, double rel_tol) {
  if (!(mu.alpha() < 2.0)) throw ModelError("dalang integral is infinite for alpha >= 2");
  if (t < 0.0) throw ModelError("alpha_n_quadrature requires t >= 0");
  if (n != 1 && n != 2) throw ModelError("alpha_n_quadrature supports n in {1, 2}");
  if (t == 0.0) return {};
  if (n == 1) return alpha1(t, mu, gamma, eq, rel_tol);
  if (eq != Equation::wave || mu.dim() != 1 || mu.alpha() != 1.0)
    throw ModelError("alpha_2 quadrature requires the wave equation with alpha = d = 1");
  return alpha2_constant_density(t, mu, gamma, rel_tol);
}

}  // namespace ham
