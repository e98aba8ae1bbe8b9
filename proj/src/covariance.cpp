#include "ham/covariance.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "ham/errors.hpp"

namespace ham {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
}  // namespace

//---------------------------------------------------------------------------//
// TemporalCovariance
//---------------------------------------------------------------------------//

TemporalCovariance TemporalCovariance::fractional(double H) {
  if (!(H > 0.5 && H < 1.0))
    throw ModelError("fractional covariance requires H in (0.5, 1), got " + std::to_string(H));
  return {Kind::fractional, H};
}

TemporalCovariance TemporalCovariance::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ModelError("exponential covariance requires lambda > 0, got " +
                     std::to_string(lambda));
  return {Kind::exponential, lambda};
}

std::string TemporalCovariance::name() const {
  return kind_ == Kind::fractional ? "fractional" : "exponential";
}

double TemporalCovariance::gamma(double t) const {
  double a = std::abs(t);
  if (kind_ == Kind::fractional) {
    if (a == 0.0) return kInf;
    return p_ * (2.0 * p_ - 1.0) * std::pow(a, 2.0 * p_ - 2.0);
  }
  return std::exp(-p_ * a);
}

double TemporalCovariance::nu_constant() const {
  if (kind_ == Kind::fractional)
    return std::tgamma(2.0 * p_ + 1.0) * std::sin(kPi * p_);
  return 2.0 * p_;
}

double TemporalCovariance::nu_density(double tau) const {
  double a = std::abs(tau);
  if (kind_ == Kind::fractional) {
    if (a == 0.0) return kInf;
    return nu_constant() * std::pow(a, 1.0 - 2.0 * p_);
  }
  return 2.0 * p_ / (p_ * p_ + a * a);
}

double TemporalCovariance::gamma_bar(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::fractional) return 2.0 * p_ * std::pow(t, 2.0 * p_ - 1.0);
  return -2.0 * std::expm1(-p_ * t) / p_;
}

double TemporalCovariance::gamma_bar_inverse(double g) const {
  if (g <= 0.0) return 0.0;
  if (kind_ == Kind::fractional) return std::pow(g / (2.0 * p_), 1.0 / (2.0 * p_ - 1.0));
  double x = 0.5 * p_ * g;
  if (x >= 1.0) return kInf;
  return -std::log1p(-x) / p_;
}

double TemporalCovariance::nu_mass(double T) const {
  if (T <= 0.0) return 0.0;
  if (kind_ == Kind::fractional) {
    double e = 2.0 - 2.0 * p_;
    return 2.0 * nu_constant() * std::pow(T, e) / e;
  }
  return 4.0 * std::atan(T / p_);
}

double TemporalCovariance::nu_radius_quantile(double u, double T_max) const {
  if (kind_ == Kind::fractional) return T_max * std::pow(u, 1.0 / (2.0 - 2.0 * p_));
  return p_ * std::tan(u * std::atan(T_max / p_));
}

//---------------------------------------------------------------------------//
// SpatialMeasure
//---------------------------------------------------------------------------//

double sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double riesz_classical_constant(double alpha, int d) {
  if (!(alpha < d)) return kInf;
  return std::pow(2.0, d - alpha) * std::pow(kPi, 0.5 * d) * std::tgamma(0.5 * (d - alpha)) /
         std::tgamma(0.5 * alpha);
}

SpatialMeasure SpatialMeasure::riesz(double alpha, int d, Normalization norm) {
  if (d < 1) throw ModelError("riesz measure requires d >= 1");
  if (!(alpha > 0.0 && alpha < 2.0 && alpha <= d))
    throw ModelError("riesz measure requires alpha in (0, min(2, d)) or alpha = d = 1, got alpha=" +
                     std::to_string(alpha) + ", d=" + std::to_string(d));
  if (alpha == d && norm == Normalization::classical)
    throw ModelError("classical riesz normalization requires alpha < d");
  return riesz_unchecked(alpha, d, norm);
}

SpatialMeasure SpatialMeasure::riesz_unchecked(double alpha, int d, Normalization norm) {
  double c = norm == Normalization::unit ? 1.0 : riesz_classical_constant(alpha, d);
  return {alpha, d, norm, c};
}

std::string SpatialMeasure::name() const { return "riesz"; }

double SpatialMeasure::radial_density(double r) const {
  double e = alpha_ - d_;
  if (r == 0.0) return e < 0.0 ? kInf : (e == 0.0 ? c_ : 0.0);
  return c_ * std::pow(r, e);
}

double SpatialMeasure::radial_weight() const { return c_ * sphere_area(d_); }

double SpatialMeasure::kernel(std::span<const double> x) const {
  if (!(alpha_ < d_)) throw ModelError("riesz kernel |x|^-alpha needs alpha < d");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (r2 == 0.0) return kInf;
  return c_ / riesz_classical_constant(alpha_, d_) * std::pow(r2, -0.5 * alpha_);
}

//---------------------------------------------------------------------------//
// Free operations
//---------------------------------------------------------------------------//

double gamma_eval(const TemporalCovariance& model, double t) { return model.gamma(t); }
double nu_density(const TemporalCovariance& model, double tau) { return model.nu_density(tau); }
double gamma_bar(const TemporalCovariance& model, double t) { return model.gamma_bar(t); }

double mu_density(const SpatialMeasure& model, std::span<const double> xi) {
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  return model.radial_density(std::sqrt(r2));
}

ParsevalResult parseval_check(const TemporalCovariance& model, double a, double b) {
  if (b < a) throw ModelError("parseval_check requires a <= b");
  ParsevalResult out;
  const double L = b - a;
  if (L == 0.0) return out;

  // Time side: int_{-L}^{L} gamma(u) (L - |u|) du, singularity absorbed by
  // integrating in the cumulative-mass variable.
  auto time = quad::gk([&](double g) { return L - model.gamma_bar_inverse(g); }, 0.0,
                       model.gamma_bar(L), 1e-12);

  // Spectral side: (4/pi) int_0^inf sin^2(tau L/2) nu(tau) / tau^2 dtau.
  const bool frac = model.kind() == TemporalCovariance::Kind::fractional;
  const double H = model.parameter();
  const double head_a = frac ? 2.0 - 2.0 * H : 1.0;
  const double period = 2.0 * kPi / L;
  auto sinc_sq = [&](double tau) {
    double x = 0.5 * tau * L;
    double s = x < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return 0.25 * L * L * s * s;
  };
  // nu(tau) / tau^{head_a - 1}, bounded near zero.
  auto nu_reg = [&](double tau) {
    return frac ? model.nu_constant() : model.nu_density(tau);
  };
  auto full = [&](double tau) { return sinc_sq(tau) * model.nu_density(tau); };
  auto head = quad::power_head([&](double tau) { return sinc_sq(tau) * nu_reg(tau); }, head_a,
                               period, 1e-12);
  const double R = std::max(2.0 * period, 2000.0 / L);
  auto mid = quad::panels(full, period, R, period, 1e-12);
  const double q = frac ? 1.0 + 2.0 * H : 4.0;
  const double lim = frac ? 0.5 * model.nu_constant() : model.parameter();
  auto tail = quad::power_tail(
      [&](double tau) { return 0.5 * model.nu_density(tau) / (tau * tau); }, 1.0, q, lim, R,
      1e-12);

  quad::Result spec = head;
  spec += mid;
  spec += tail;
  spec = spec.scaled(4.0 / kPi);

  out.time_side = time.value;
  out.time_error = time.error;
  out.spectral_side = spec.value;
  // The averaged tail drops an oscillating remainder of order nu(R)/(R^2 L).
  out.spectral_error = spec.error + model.nu_density(R) / (R * R * L);
  out.converged = time.converged && spec.converged;
  return out;
}

}  // namespace ham
