#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "golden.hpp"
#include "generators.hpp"
#include "gsl_oracle.hpp"
#include "ham/covariance.hpp"
#include "ham/errors.hpp"

using namespace ham;
using gen::rel_close;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("gamma_eval examples") {
  auto frac = TemporalCovariance::fractional(0.75);
  auto expo = TemporalCovariance::exponential(1.0);
  CHECK(gamma_eval(frac, 1.0) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(gamma_eval(frac, 0.0) == kInf);
  CHECK(gamma_eval(expo, 0.0) == 1.0);
}

TEST_CASE("nu_density examples") {
  auto expo = TemporalCovariance::exponential(1.0);
  CHECK(nu_density(expo, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  // Inversion integral: (1/2pi) int e^{i tau t} nu(tau) dtau = exp(-|t|).
  for (double t : {0.3, 1.0, 2.5}) {
    double inv = oracle::integrate_fourier([&](double x) { return nu_density(expo, x); }, 0.0, t,
                                           false) / kPi;
    CHECK(inv == doctest::Approx(std::exp(-t)).epsilon(1e-8));
  }
  auto frac = TemporalCovariance::fractional(0.75);
  CHECK(frac.nu_constant() == doctest::Approx(golden::value("c_H_0.75")).epsilon(1e-14));
  CHECK(nu_density(frac, 2.0) == doctest::Approx(frac.nu_constant() * std::pow(2.0, -0.5)));
}

TEST_CASE("gamma_bar examples against QUADPACK") {
  auto frac = TemporalCovariance::fractional(0.75);
  CHECK(gamma_bar(frac, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  double q = 2.0 * oracle::integrate_alg([](double) { return 0.375; }, 0.0, 1.0, -0.5, 0.0);
  CHECK(q == doctest::Approx(1.5).epsilon(1e-10));

  auto e2 = TemporalCovariance::exponential(2.0);
  CHECK(gamma_bar(e2, 1.0) == doctest::Approx(0.864664716763387).epsilon(1e-14));
  double qe = 2.0 * oracle::integrate([&](double s) { return e2.gamma(s); }, 0.0, 1.0);
  CHECK(gamma_bar(e2, 1.0) == doctest::Approx(qe).epsilon(1e-12));
  CHECK(gamma_bar(frac, 0.0) == 0.0);
  CHECK(gamma_bar(e2, 0.0) == 0.0);
}

TEST_CASE("mu_density examples") {
  auto m11 = SpatialMeasure::riesz(1.0, 1);
  auto m12 = SpatialMeasure::riesz(1.0, 2);
  auto m051 = SpatialMeasure::riesz(0.5, 1);
  std::vector<double> x1{2.0}, x2{3.0, 4.0}, zero{0.0};
  CHECK(mu_density(m11, x1) == 1.0);
  CHECK(mu_density(m12, x2) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(mu_density(m051, zero) == kInf);
}

TEST_CASE("parseval_check examples") {
  auto frac = TemporalCovariance::fractional(0.75);
  auto expo = TemporalCovariance::exponential(1.0);
  auto p = parseval_check(frac, 0.0, 1.0);
  CHECK(p.time_side == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.spectral_side == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.converged);
  auto pe = parseval_check(expo, 0.0, 1.0);
  CHECK(pe.time_side == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-10));
  auto z = parseval_check(frac, 0.3, 0.3);
  CHECK(z.time_side == 0.0);
  CHECK(z.spectral_side == 0.0);
  CHECK_THROWS_AS(parseval_check(frac, 1.0, 0.0), ModelError);
}

TEST_CASE("parseval spectral side matches the mpmath oracle") {
  auto frac = TemporalCovariance::fractional(0.75);
  CHECK(parseval_check(frac, 0.5, 2.0).spectral_side ==
        doctest::Approx(golden::value("parseval_spectral_frac_0.75_L1.5")).epsilon(1e-6));
}

TEST_CASE("property: parseval balances on both windows for random kernels") {
  gen::for_all(12, 11, [](gen::Gen& g, int i) {
    auto model = g.temporal();
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.5, 2.0}}) {
      auto p = parseval_check(model, a, b);
      INFO("case ", i, " ", model.name(), " p=", model.parameter(), " [", a, ",", b, "]");
      CHECK(std::abs(p.time_side - p.spectral_side) / p.time_side < 1e-3);
    }
  });
}

TEST_CASE("property: gamma is even and nonnegative, gamma_bar is monotone") {
  gen::for_all(200, 12, [](gen::Gen& g, int i) {
    auto model = g.temporal();
    double t = g.log_uniform(1e-4, 50.0);
    INFO("case ", i);
    CHECK(gamma_eval(model, t) == gamma_eval(model, -t));
    CHECK(gamma_eval(model, t) >= 0.0);
    CHECK(nu_density(model, t) == nu_density(model, -t));
    CHECK(nu_density(model, t) >= 0.0);
    double t2 = t * g.uniform(1.001, 3.0);
    if (model.kind() == TemporalCovariance::Kind::fractional) {
      CHECK(gamma_bar(model, t) < gamma_bar(model, t2));
      CHECK(model.gamma_bar_inverse(model.gamma_bar(t)) == doctest::Approx(t).epsilon(1e-10));
    } else {
      // Gamma_t saturates at 2 / lambda, so only monotonicity survives rounding.
      CHECK(gamma_bar(model, t) <= gamma_bar(model, t2));
      if (model.parameter() * t < 5.0)
        CHECK(model.gamma_bar_inverse(model.gamma_bar(t)) == doctest::Approx(t).epsilon(1e-9));
    }
  });
}

TEST_CASE("property: nu_mass and its radius quantile are inverse") {
  gen::for_all(100, 13, [](gen::Gen& g, int i) {
    auto model = g.temporal();
    double T = g.log_uniform(0.1, 1e3), u = g.uniform(0.01, 0.99);
    double r = model.nu_radius_quantile(u, T);
    INFO("case ", i);
    CHECK(model.nu_mass(r) / model.nu_mass(T) == doctest::Approx(u).epsilon(1e-10));
    double q = 2.0 * oracle::integrate([&](double x) { return model.nu_density(x); }, 0.0, T);
    CHECK(model.nu_mass(T) == doctest::Approx(q).epsilon(1e-8));
  });
}

TEST_CASE("property: mu_density is radial") {
  gen::for_all(200, 14, [](gen::Gen& g, int i) {
    auto mu = g.spatial();
    double r = g.log_uniform(1e-3, 1e3);
    auto a = g.on_sphere(mu.dim(), r), b = g.on_sphere(mu.dim(), r);
    INFO("case ", i);
    CHECK(rel_close(mu_density(mu, a), mu_density(mu, b), 1e-13));
  });
}

TEST_CASE("classical Riesz constant passes a Gaussian Parseval check") {
  // int int |x-y|^{-alpha} phi(x) phi(y) = (2pi)^{-d} int |F phi|^2 mu with
  // phi = exp(-|x|^2/2): both sides reduce to one radial integral.
  for (int d : {1, 2, 3}) {
    for (double alpha : {0.3, 0.7, 0.95}) {
      if (!(alpha < d)) continue;
      auto mu = SpatialMeasure::riesz(alpha, d, SpatialMeasure::Normalization::classical);
      double w = sphere_area(d);
      double lhs = std::pow(kPi, 0.5 * d) * w *
                   oracle::integrate_to_inf(
                       [&](double r) { return std::pow(r, d - 1 - alpha) * std::exp(-r * r / 4); },
                       0.0);
      double rhs = mu.constant() * w *
                   oracle::integrate_to_inf(
                       [&](double r) { return std::pow(r, alpha - 1) * std::exp(-r * r); }, 0.0);
      INFO("d=", d, " alpha=", alpha);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
      std::vector<double> x(d, 0.0);
      x[0] = 2.0;
      CHECK(mu.kernel(x) == doctest::Approx(std::pow(2.0, -alpha)).epsilon(1e-14));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(TemporalCovariance::fractional(0.5), ModelError);
  CHECK_THROWS_AS(TemporalCovariance::fractional(1.0), ModelError);
  CHECK_THROWS_AS(TemporalCovariance::exponential(0.0), ModelError);
  CHECK_THROWS_AS(SpatialMeasure::riesz(2.5, 3), ModelError);
  CHECK_THROWS_AS(SpatialMeasure::riesz(2.0, 2), ModelError);
  CHECK_THROWS_AS(SpatialMeasure::riesz(0.0, 1), ModelError);
  CHECK_THROWS_AS(SpatialMeasure::riesz(1.0, 1, SpatialMeasure::Normalization::classical),
                  ModelError);
  CHECK_NOTHROW(SpatialMeasure::riesz(1.0, 1));
  CHECK_NOTHROW(SpatialMeasure::riesz(1.5, 3, SpatialMeasure::Normalization::classical));
}
