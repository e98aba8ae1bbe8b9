#pragma once

// Second moments of the Wiener chaos terms of the wave equation with
// multiplicative noise: Monte Carlo and quadrature estimates of alpha_n(t),
// the moment bounds and the second-moment series.

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ham/covariance.hpp"
#include "ham/quadrature.hpp"
#include "ham/wave_kernel.hpp"

namespace ham {

struct ChaosMomentEstimate {
  int n = 0;
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  double imag_residual = 0.0;
  double effective_sample_size = 0.0;
  double split_N = 0.0;      //!< radius separating the two proposal strata
  bool low_ess = false;      //!< ESS below 1% of n_samples
};

struct McConfig {
  std::uint64_t samples = 1'000'000;
  double split_N = 0.0;  //!< proposal split radius; 0 selects 1 / t
};

//! Number of independent Monte Carlo batches; fixed so results do not
//! depend on the number of worker threads.
inline constexpr int kMcBatches = 64;

/*!
 * prod_k FG(t_{k+1} - t_k)(|xi_1 + ... + xi_k|) with t_{n+1} = t, for the wave
 * kernel. xis holds n points of dimension d, stored contiguously.
 */
double chaos_fourier_product(std::span<const double> times, std::span<const double> xis, int d,
                             double t);

//! (C_N, D_N): mass of |xi|^{-2} mu outside the ball of radius N and of mu inside it.
std::pair<double, double> cn_dn_split(const SpatialMeasure& mu, double N);

//! 8 (2pi)^{-d} C_N Gamma_t t, the ratio of the geometric series closing the moment bound.
double series_ratio(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t, double N);

//! Smallest power of two N with series_ratio(N) < target.
double auto_split_N(const SpatialMeasure& mu, const TemporalCovariance& gamma, double t,
                    double target = 0.5);

//! Gamma_t^n n! (2pi)^{-nd} 8^n sum_k t^{n+2k} D_N^k C_N^{n-k} / k!.
double alpha_upper_bound(int n, double t, const SpatialMeasure& mu,
                         const TemporalCovariance& gamma, double N);

//! Importance-sampled Monte Carlo estimate of alpha_n(t).
ChaosMomentEstimate alpha_n_mc(int n, double t, const SpatialMeasure& mu,
                               const TemporalCovariance& gamma, const McConfig& cfg,
                               std::uint64_t seed);

/*!
 * Deterministic value of alpha_n(t) for n in {1, 2}.
 *
 * n = 1 works for any Riesz measure and either equation. n = 2 is restricted
 * to the wave equation with a constant spectral density (alpha = d = 1).
 */
quad::Result alpha_n_quadrature(int n, double t, const SpatialMeasure& mu,
                                const TemporalCovariance& gamma,
                                Equation eq = Equation::wave, double rel_tol = 1e-9);

struct SeriesSummary {
  double t = 0.0;
  std::vector<double> terms;        //!< alpha_n / n! for n = 0..n_max
  std::vector<double> term_errors;  //!< standard errors of terms
  std::vector<ChaosMomentEstimate> estimates;  //!< n = 1..n_max
  std::vector<double> upper_bounds;            //!< alpha_upper_bound for n = 0..n_max
  double partial_sum = 1.0;
  double tail_bound = 0.0;
  double N_split = 0.0;
  double C_N = 0.0;
  double D_N = 0.0;
  SpatialMeasure mu = SpatialMeasure::riesz(1.0, 1);
  TemporalCovariance gamma = TemporalCovariance::fractional(0.75);
};

//! Sum_{n > m} bound_n / n! for the geometric closure with ratio a and
//! bulk parameter b = t^2 D_N / C_N; requires a < 1.
double series_tail(int m, double a, double b);

//! Partial sum of alpha_n / n! with a rigorous tail bound.
SeriesSummary second_moment_series(double t, const SpatialMeasure& mu,
                                   const TemporalCovariance& gamma, int n_max, double N,
                                   const McConfig& cfg, std::uint64_t seed);

//! Upper bound for the p-th moment norm of u(t, x) from the series terms.
double p_moment_bound(double t, double p, const SeriesSummary& series);

//! Closed form of int_{0<t_1<...<t_n<t} prod_{j<n} (t_{j+1}-t_j)^h (t-t_n)^h dt.
double simplex_integral(int n, double t, double h);

//! Nested adaptive quadrature of the same simplex integral.
quad::Result simplex_integral_quadrature(int n, double t, double h, double rel_tol = 1e-10);

struct GammaLbReport {
  double a = 0.0;
  std::vector<int> n_values;
  std::vector<double> ratios;  //!< Gamma(a n + 1) / (n!)^a
  double min_ratio = 0.0;
  int argmin = 0;
  bool positive = false;
};

GammaLbReport gamma_lb_check(double a, int n_lo, int n_hi);

struct BasicInequality {
  double lhs = 0.0;
  double rhs = 0.0;
};

//! int int gamma(t_1 - s_1) h(t_1) ds_1 dt_1 against Gamma_t int |h|, for n = 1.
template <class F>
BasicInequality basic_inequality_check(const TemporalCovariance& g, double t, F&& h) {
  auto inner = [&](double r) {
    return 0.5 * (g.gamma_bar(r) + g.gamma_bar(t - r));
  };
  BasicInequality out;
  out.lhs = quad::gk([&](double r) { return h(r) * inner(r); }, 0.0, t, 1e-12).value;
  out.rhs = g.gamma_bar(t) * quad::gk([&](double r) { return std::abs(h(r)); }, 0.0, t, 1e-12).value;
  return out;
}

}  // namespace ham
