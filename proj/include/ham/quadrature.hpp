#pragma once

// Adaptive Gauss-Kronrod building blocks shared by the numerical modules.
// Every helper returns a value together with an error estimate so callers
// can surface non-convergence instead of silently returning garbage.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ham::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  double l1 = 0.0;  //!< integral of |f|, the scale for the relative error test

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    l1 += o.l1;
    return *this;
  }
  Result scaled(double c) const {
    return {value * c, error * std::abs(c), converged, l1 * std::abs(c)};
  }
};

inline bool within_tolerance(double value, double err, double l1, double rel_tol) {
  return std::isfinite(value) && err <= std::max(100.0 * rel_tol * l1, 1e-300);
}

//! Re-tests convergence on the summed error of a composite rule, so pieces
//! where the integrand nearly vanishes do not fail on their own.
inline Result& settle(Result& r, double rel_tol) {
  r.converged = within_tolerance(r.value, r.error, r.l1, rel_tol);
  return r;
}

inline constexpr unsigned kDefaultDepth = 18;

//! Adaptive 21-point Gauss-Kronrod on a finite interval.
template <class F>
Result gk(F&& f, double a, double b, double rel_tol = 1e-10,
          unsigned max_depth = kDefaultDepth) {
  if (!(b > a)) return {};
  double err = 0.0, l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, max_depth, rel_tol, &err, &l1);
  return {v, err, within_tolerance(v, err, l1, rel_tol), l1};
}

//! Non-adaptive 15-point Gauss-Kronrod; exact for polynomials of degree 22.
template <class F>
double gk15_fixed(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0);
}

//! Adaptive GK over [a,b] split at the given interior break points.
template <class F>
Result gk_breaks(F&& f, double a, double b, std::vector<double> breaks,
                 double rel_tol = 1e-10, unsigned max_depth = kDefaultDepth) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  std::vector<std::pair<double, double>> pieces;
  double lo = a;
  for (double x : breaks) {
    if (x <= lo) continue;
    if (x > b) break;
    pieces.emplace_back(lo, x);
    lo = x;
  }
  // Each piece is held to the tolerance of the whole range, so pieces where
  // the integrand is roundoff noise do not refine to max_depth.
  std::vector<Result> coarse(pieces.size());
  double l1_total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    coarse[i] = gk(f, pieces[i].first, pieces[i].second, rel_tol, 0);
    l1_total += coarse[i].l1;
  }
  Result total;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double l1 = coarse[i].l1;
    if (coarse[i].error <= rel_tol * l1_total && std::isfinite(coarse[i].value)) {
      total += coarse[i];
      continue;
    }
    double tol = l1 > 0.0 ? std::min(0.1, rel_tol * l1_total / l1) : 0.1;
    tol = std::max(tol, rel_tol);
    total += gk(f, pieces[i].first, pieces[i].second, tol, max_depth);
  }
  return settle(total, rel_tol);
}

//! Sum of adaptive GK over consecutive panels of the given width on [lo,hi].
template <class F>
Result panels(F&& f, double lo, double hi, double width, double rel_tol = 1e-10) {
  Result total;
  if (!(hi > lo)) return total;
  auto n = static_cast<long>(std::ceil((hi - lo) / width));
  n = std::max(n, 1L);
  double step = (hi - lo) / static_cast<double>(n);
  for (long k = 0; k < n; ++k) {
    double a = lo + step * static_cast<double>(k);
    double b = (k + 1 == n) ? hi : a + step;
    total += gk(f, a, b, rel_tol, 12);
  }
  return settle(total, rel_tol);
}

//! int_0^b x^{a-1} f(x) dx for bounded f, via x = b s^{1/a}.
template <class F>
Result power_head(F&& f, double a, double b, double rel_tol = 1e-10) {
  if (!(b > 0.0)) return {};
  auto g = [&](double s) { return f(b * std::pow(s, 1.0 / a)); };
  return gk(g, 0.0, 1.0, rel_tol).scaled(std::pow(b, a) / a);
}

//! int_b^inf x^{a-1} f(x) dx where x^q f(x) -> lim as x -> inf and q > a.
//! Maps x = b s^{-1/(q-a)} so the transformed integrand is bounded.
template <class F>
Result power_tail(F&& f, double a, double q, double lim, double b, double rel_tol = 1e-10) {
  const double e = q - a;
  auto g = [&](double s) {
    double x = b * std::pow(s, -1.0 / e);
    if (!std::isfinite(x) || x > 1e100) return lim;
    return std::exp(q * std::log(x)) * f(x);
  };
  return gk(g, 0.0, 1.0, rel_tol).scaled(std::pow(b, a - q) / e);
}

//! int_0^inf x^{a-1} f(x) dx with f bounded near 0 and x^q f(x) -> lim.
template <class F>
Result power_halfline(F&& f, double a, double q, double lim, double split = 1.0,
                      double rel_tol = 1e-10) {
  Result r = power_head(f, a, split, rel_tol);
  r += power_tail(f, a, q, lim, split, rel_tol);
  return settle(r, rel_tol);
}

}  // namespace ham::quad
