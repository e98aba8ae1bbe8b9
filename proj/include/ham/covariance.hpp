#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ham/quadrature.hpp"

namespace ham {

/*!
 * Temporal covariance gamma with spectral density nu and cumulative mass
 * Gamma_t = int_{-t}^{t} gamma(s) ds.
 *
 * Fourier convention: F phi(tau) = int e^{-i tau t} phi(t) dt and
 * int phi gamma = (1/2pi) int F phi dnu.
 */
class TemporalCovariance {
 public:
  enum class Kind { fractional, exponential };

  //! gamma(t) = H(2H-1)|t|^{2H-2}, H in (1/2, 1).
  static TemporalCovariance fractional(double H);
  //! gamma(t) = exp(-lambda |t|), lambda > 0.
  static TemporalCovariance exponential(double lambda);

  Kind kind() const { return kind_; }
  //! H for the fractional kind, lambda for the exponential kind.
  double parameter() const { return p_; }
  std::string name() const;

  double gamma(double t) const;
  double nu_density(double tau) const;
  double gamma_bar(double t) const;
  //! Inverse of t -> gamma_bar(t) on [0, inf).
  double gamma_bar_inverse(double g) const;
  //! Spectral constant c_H (fractional) or 2 lambda (exponential).
  double nu_constant() const;
  //! nu([-T, T]).
  double nu_mass(double T) const;
  //! Inverse of T -> nu([-T, T]) / nu([-T_max, T_max]) restricted to [0, T_max].
  double nu_radius_quantile(double u, double T_max) const;

 private:
  TemporalCovariance(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

/*!
 * Radial spectral measure mu(d xi) = C |xi|^{alpha-d} d xi of the Riesz
 * family. Unit normalization uses C = 1; classical normalization uses the
 * constant that makes mu the Fourier transform of |x|^{-alpha}.
 */
class SpatialMeasure {
 public:
  enum class Normalization { unit, classical };

  //! Validated constructor: 0 < alpha < 2 and alpha <= d; alpha = d needs
  //! unit normalization (spectrally white noise).
  static SpatialMeasure riesz(double alpha, int d, Normalization norm = Normalization::unit);
  //! Unvalidated constructor, used to probe divergence in rejected regions.
  static SpatialMeasure riesz_unchecked(double alpha, int d,
                                        Normalization norm = Normalization::unit);

  double alpha() const { return alpha_; }
  int dim() const { return d_; }
  Normalization normalization() const { return norm_; }
  std::string name() const;

  //! Density prefactor C.
  double constant() const { return c_; }
  //! Radial density rho(r) = C r^{alpha-d}; +inf at r = 0 when alpha < d.
  double radial_density(double r) const;
  //! C * omega_d: int mu F(|xi|) = radial_weight * int r^{alpha-1} F(r) dr.
  double radial_weight() const;
  //! Spatial kernel f(x) = (C / C_classical) |x|^{-alpha}; requires alpha < d.
  double kernel(std::span<const double> x) const;

 private:
  SpatialMeasure(double alpha, int d, Normalization n, double c)
      : alpha_(alpha), d_(d), norm_(n), c_(c) {}
  double alpha_;
  int d_;
  Normalization norm_;
  double c_;
};

//! Surface area of the unit sphere in R^d.
double sphere_area(int d);
//! Classical Riesz constant 2^{d-a} pi^{d/2} Gamma((d-a)/2) / Gamma(a/2).
double riesz_classical_constant(double alpha, int d);

double gamma_eval(const TemporalCovariance& model, double t);
double nu_density(const TemporalCovariance& model, double tau);
double gamma_bar(const TemporalCovariance& model, double t);
double mu_density(const SpatialMeasure& model, std::span<const double> xi);

struct ParsevalResult {
  double time_side = 0.0;
  double spectral_side = 0.0;
  double time_error = 0.0;
  double spectral_error = 0.0;
  bool converged = true;
};

//! Energy of the indicator of [a,b] computed in time and in frequency.
ParsevalResult parseval_check(const TemporalCovariance& model, double a, double b);

//! int_{-t}^{t} gamma(w) F(w) dw for F bounded, using the inverse of
//! gamma_bar to absorb the singularity of gamma at 0.
template <class F>
quad::Result integrate_against_gamma(const TemporalCovariance& g, double t, F&& f,
                                     double rel_tol = 1e-10) {
  double total = g.gamma_bar(t);
  auto h = [&](double s) {
    double w = g.gamma_bar_inverse(s);
    return 0.5 * (f(w) + f(-w));
  };
  return quad::gk(h, 0.0, total, rel_tol);
}

//! As above, with the range split where |w| equals one of the break points.
template <class F>
quad::Result integrate_against_gamma(const TemporalCovariance& g, double t, F&& f,
                                     const std::vector<double>& breaks, double rel_tol,
                                     unsigned max_depth = 14) {
  auto h = [&](double s) {
    double w = std::min(g.gamma_bar_inverse(s), t);
    return 0.5 * (f(w) + f(-w));
  };
  std::vector<double> gb;
  for (double b : breaks) {
    double a = std::abs(b);
    if (a > 0.0 && a < t) gb.push_back(g.gamma_bar(a));
  }
  return quad::gk_breaks(h, 0.0, g.gamma_bar(t), gb, rel_tol, max_depth);
}

}  // namespace ham
