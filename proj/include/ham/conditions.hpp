#pragma once

#include <string>
#include <vector>

#include "ham/covariance.hpp"

namespace ham {

//! Value of a spectral integral; value is +inf when finite == false.
struct SpectralIntegral {
  double value = 0.0;
  bool finite = true;
  double error = 0.0;
  bool converged = true;
  std::string reason;  //!< analytic divergence reason, empty when finite
};

//! int (1 + |xi|^2)^{-1} mu(d xi).
SpectralIntegral dalang_integral(const SpatialMeasure& mu);

//! int (1 + |xi|^2)^{-beta} mu(d xi); finite for riesz iff beta > alpha / 2.
SpectralIntegral holder_integral(const SpatialMeasure& mu, double beta);

//! int (1 + |xi + eta|^2)^{-beta} mu(d xi).
SpectralIntegral shifted_beta_integral(const SpatialMeasure& mu, double beta,
                                       const std::vector<double>& eta);

using PointGrid = std::vector<std::vector<double>>;

//! 0, +-0.5, +-1, +-2, +-5 for d = 1; 8 directions x radii {0.5,1,2,5} otherwise.
PointGrid default_eta_grid(int d);

struct MaxPrincipleReport {
  double center = 0.0;          //!< value at eta = 0
  std::vector<double> values;   //!< value per grid point
  std::size_t violations = 0;
  double max_excess = 0.0;      //!< max (value - center) / center over the grid
  double rel_tol = 1e-6;
};

//! Checks that the shifted integral is maximal at eta = 0 on the grid.
MaxPrincipleReport max_principle_verify(const SpatialMeasure& mu, double beta,
                                        const PointGrid& eta_grid, double rel_tol = 1e-6);

struct SupBoundReport {
  double t = 0.0;
  double rhs_weighted = 0.0;  //!< 4 t^2 int (1 + t^2|xi|^2)^{-1} mu
  double rhs_dalang = 0.0;    //!< 2 (t^2 v 1) int (1 + |xi|^2)^{-1} mu
  std::vector<double> lhs;    //!< int |F G(t)(xi + eta)|^2 mu per grid point
  std::size_t violations = 0;
  double min_margin = 0.0;    //!< min over grid of (min rhs - lhs) / min rhs
};

//! Verifies both suprema bounds on |F G(t)|^2 over a grid of shifts.
SupBoundReport sup_bound_check(const SpatialMeasure& mu, double t, const PointGrid& eta_grid);

//! int |F G(t)(xi + eta)|^2 mu(d xi) for the wave kernel.
SpectralIntegral shifted_wave_energy(const SpatialMeasure& mu, double t, double eta_norm);

double euclidean_norm(const std::vector<double>& x);

}  // namespace ham
