#pragma once

// Random-feature simulation of the linear solution v(t, x) as a Gaussian
// field built from Hermitian pairs of spectral features (tau, xi).

#include <complex>
#include <cstdint>
#include <vector>

#include "ham/covariance.hpp"

namespace ham {

//! int_0^t e^{-i tau s} FG(t - s)(m) ds for the wave kernel, m = |xi|.
std::complex<double> time_factor(double t, double tau, double m);

struct FieldSpec {
  std::vector<double> times;               //!< sorted, nonnegative
  std::vector<std::vector<double>> sites;  //!< points in R^d
  std::size_t n_features = 8192;           //!< Hermitian pairs
  std::size_t n_replicates = 1000;
  std::uint64_t seed = 0;
  double tau_max = 0.0;  //!< 0 selects the 99.99% envelope radius
  double xi_max = 0.0;   //!< 0 selects the 99.99% envelope radius
};

struct Truncation {
  double tau_max = 0.0;
  double xi_max = 0.0;
  double tau_mass_fraction = 0.0;  //!< captured share of int min(t^2, tau^-2) nu
  double xi_mass_fraction = 0.0;   //!< captured share of int min(t^2, |xi|^-2) mu
  double t_ref = 0.0;              //!< horizon defining the envelopes
};

//! Envelope mass fractions captured by given radii, for horizon t.
Truncation truncation_for(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t,
                          double tau_max, double xi_max);

//! Smallest radii capturing the given share of both envelope masses.
Truncation default_truncation(const SpatialMeasure& mu, const TemporalCovariance& gamma,
                              double t, double share = 0.99);

struct FieldGrid {
  std::vector<double> times;
  std::vector<std::vector<double>> sites;
  std::size_t n_replicates = 0;
  std::vector<double> values;  //!< [replicate][time][site], row major
  std::size_t n_features = 0;
  Truncation truncation;
  std::uint64_t seed = 0;
  //! Conditional variance at each (time, site) given the feature table.
  std::vector<double> feature_variance;

  double at(std::size_t rep, std::size_t ti, std::size_t si) const {
    return values[(rep * times.size() + ti) * sites.size() + si];
  }
};

FieldGrid simulate_field(const SpatialMeasure& mu, const TemporalCovariance& gamma,
                         const FieldSpec& spec);

struct GridPoint {
  std::size_t time_index = 0;
  std::size_t site_index = 0;
};

struct CovarianceEntry {
  double value = 0.0;
  double std_error = 0.0;  //!< jackknife; infinite with two replicates
};

//! Unbiased sample covariance across replicates for each pair of grid points.
std::vector<CovarianceEntry> empirical_covariance(
    const FieldGrid& grid, const std::vector<std::pair<GridPoint, GridPoint>>& pairs);

enum class IncrementMode { time, space };

struct IncrementSample {
  double scale = 0.0;
  double moment = 0.0;
  double std_error = 0.0;
};

/*!
 * Empirical E|v(p + shift) - v(p)|^2. Time mode pairs the base time with the
 * shifted time at every site; space mode pairs every site x with x + shift e_1
 * at the base time. Shifted points must be on the grid.
 */
std::vector<IncrementSample> increment_samples(const FieldGrid& grid, IncrementMode mode,
                                               const std::vector<double>& shifts,
                                               std::size_t base_time_index = 0);

}  // namespace ham
