#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ham/conditions.hpp"
#include "ham/covariance.hpp"
#include "ham/quadrature.hpp"

namespace ham {

//! E|v(t+h, x) - v(t, x)|^2 for the linear wave solution v.
quad::Result time_increment_moment(double t, double h, const SpatialMeasure& mu,
                                   const TemporalCovariance& gamma, double rel_tol = 1e-10);

//! E|v(t, x+z) - v(t, x)|^2 for the linear wave solution v.
quad::Result space_increment_moment(double t, const std::vector<double>& z,
                                    const SpatialMeasure& mu, const TemporalCovariance& gamma,
                                    double rel_tol = 1e-9);

struct HolderFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> scales;
  std::vector<double> moments;
};

//! Least-squares fit of log moment = exponent * log scale + intercept.
HolderFit holder_fit(const std::vector<std::pair<double, double>>& pairs);

//! int |FG(t+h)(xi+eta) - FG(t)(xi+eta)|^2 mu(d xi).
quad::Result h3_lhs(const SpatialMeasure& mu, double t, double h, double eta_norm);
//! int |FG(t)(xi+eta)|^2 mu(d xi).
quad::Result h4_lhs(const SpatialMeasure& mu, double t, double eta_norm);
//! int |FG(t)(xi+eta)|^2 |1 - e^{-i(xi+eta).z}|^2 mu(d xi); eta = 0 when d >= 2.
quad::Result h5_lhs(const SpatialMeasure& mu, double t, double z_norm, double eta_norm);

struct InequalityCheck {
  std::string name;
  std::vector<double> scales;    //!< h, t or |z|
  std::vector<double> sup_lhs;   //!< sup over the remaining grid variables
  double slope = 0.0;            //!< fitted log-log slope of sup_lhs
  double predicted = 0.0;        //!< 2 - 2 beta
  double constant = 0.0;         //!< smallest C with sup_lhs <= C scale^{2-2beta} on the grid
  std::size_t violations = 0;    //!< grid points above 1.05 C scale^{2-2beta}
  bool converged = true;
  bool slope_ok = false;         //!< slope >= predicted - 0.1
};

struct IncrementBoundReport {
  double beta = 0.0;
  InequalityCheck h3, h4, h5;
};

struct IncrementGrids {
  std::vector<double> t_grid;
  std::vector<double> h_grid;
  std::vector<double> z_grid;    //!< norms of the space shifts
  std::vector<double> eta_grid;  //!< norms of the frequency shifts
};

IncrementBoundReport h3_h4_h5_verify(const SpatialMeasure& mu, double beta,
                                  const IncrementGrids& grids);

struct BoundAB {
  double A_bound = 0.0;
  double B_bound = 0.0;
  double C = 0.0;           //!< (2pi)^{-d} max(C_H3, C_H4)
  double lhs = 0.0;         //!< time_increment_moment(t, h)
  bool holds = false;       //!< lhs <= 2 (A_bound + B_bound)
  double slack = 0.0;       //!< 2 (A + B) - lhs
};

//! First-chaos right-hand sides h^{2-2b} Gamma_t C t and h^{2-2b} Gamma_{t+h} C.
BoundAB increment_bound_AB(double t, double h, double beta, const SpatialMeasure& mu,
                            const TemporalCovariance& gamma, const IncrementBoundReport& fitted);

}  // namespace ham
