#include "ham/wave_kernel.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "ham/errors.hpp"
#include "ham/quadrature.hpp"

namespace ham {

namespace {
constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}
}  // namespace

double g_fourier(const KernelSpec& spec, double t, double r) {
  if (spec.equation == Equation::heat) return std::exp(-0.5 * t * r * r);
  return wave_fourier(t, r);
}

double g_real(const KernelSpec& spec, double t, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim)
    throw ModelError("g_real: point dimension does not match kernel dimension");
  const double r2 = norm2(x);
  if (spec.equation == Equation::heat)
    return std::pow(2.0 * kPi * t, -0.5 * spec.dim) * std::exp(-r2 / (2.0 * t));
  if (spec.dim == 1) return std::sqrt(r2) < t ? 0.5 : 0.0;
  if (spec.dim == 2) {
    if (std::sqrt(r2) >= t) return 0.0;
    return 1.0 / (2.0 * kPi * std::sqrt(t * t - r2));
  }
  throw ModelError("wave kernel in d >= 3 is a measure or distribution; use g_fourier");
}

FourierIdentity fourier_identity_check(const KernelSpec& spec, double t, double r) {
  FourierIdentity out;
  out.transform = g_fourier(spec, t, r);
  quad::Result q;
  const double width = r > 0.0 ? kPi / r : t;
  if (spec.equation == Equation::wave && spec.dim == 1) {
    // int_{-t}^{t} e^{-i r x} / 2 dx = int_0^t cos(r x) dx
    q = quad::panels([&](double x) { return std::cos(r * x); }, 0.0, t, width, 1e-12);
  } else if (spec.equation == Equation::wave && spec.dim == 2) {
    // Hankel transform of the radial kernel, with rho = t sin(theta).
    q = quad::panels(
        [&](double th) {
          double s = std::sin(th);
          return t * s * boost::math::cyl_bessel_j(0, r * t * s);
        },
        0.0, 0.5 * kPi, r * t > 1.0 ? 0.5 * kPi / (r * t) : 0.5 * kPi, 1e-12);
  } else if (spec.equation == Equation::heat && spec.dim == 1) {
    const double sd = std::sqrt(t);
    q = quad::panels(
        [&](double x) {
          return 2.0 * std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * kPi * t) * std::cos(r * x);
        },
        0.0, 40.0 * sd, std::min(width, sd), 1e-12);
  } else {
    throw ModelError("fourier_identity_check supports wave d in {1,2} and heat d = 1");
  }
  out.direct = q.value;
  out.error = q.error;
  out.converged = q.converged;
  return out;
}

}  // namespace ham
