#include <cmath>
#include <vector>

#include <doctest.h>

#include "generators.hpp"
#include "golden.hpp"
#include "ham/chaos_moments.hpp"
#include "ham/errors.hpp"
#include "ham/increments.hpp"

using namespace ham;

namespace {
const SpatialMeasure golden_mu = SpatialMeasure::riesz(1.0, 1);
const TemporalCovariance golden_gamma = TemporalCovariance::fractional(0.75);

double time_inc(double t, double h, const SpatialMeasure& mu = golden_mu,
                const TemporalCovariance& g = golden_gamma) {
  return time_increment_moment(t, h, mu, g).value;
}
double space_inc(double t, double z) {
  return space_increment_moment(t, {z}, golden_mu, golden_gamma).value;
}
}  // namespace

TEST_CASE("time_increment_moment golden values") {
  CHECK(time_inc(1.0, 0.1) == doctest::Approx(golden::value("time_inc_golden_t1_h0.1")).epsilon(1e-8));
  CHECK(time_inc(1.0, 0.05) == doctest::Approx(golden::value("time_inc_golden_t1_h0.05")).epsilon(1e-8));
  CHECK(time_inc(1.0, 0.2) == doctest::Approx(golden::value("time_inc_golden_t1_h0.2")).epsilon(1e-8));
  CHECK(time_inc(1.0, 0.4) == doctest::Approx(golden::value("time_inc_golden_t1_h0.4")).epsilon(1e-8));
  CHECK(time_inc(0.5, 0.1) == doctest::Approx(golden::value("time_inc_golden_t0.5_h0.1")).epsilon(1e-8));
  CHECK(time_inc(1.0, 0.1, golden_mu, TemporalCovariance::exponential(1.0)) ==
        doctest::Approx(golden::value("time_inc_exp1_t1_h0.1")).epsilon(1e-8));
}

TEST_CASE("space_increment_moment golden values") {
  for (const char* z : {"0.05", "0.1", "0.2", "0.4", "1.0", "50.0"}) {
    INFO("z=", z);
    CHECK(space_inc(1.0, std::stod(z)) ==
          doctest::Approx(golden::value(std::string("space_inc_golden_t1_z") + z)).epsilon(1e-7));
  }
}

TEST_CASE("increment edge cases") {
  CHECK(time_inc(1.0, 0.0) == 0.0);
  CHECK(space_inc(1.0, 0.0) == 0.0);
  CHECK(time_inc(0.0, 1.0) == doctest::Approx(golden::value("alpha1_golden_t1.0")).epsilon(1e-8));
  CHECK_THROWS_AS(time_inc(0.5, -1.0), ModelError);
  CHECK_THROWS_AS(space_increment_moment(1.0, {0.1, 0.1}, golden_mu, golden_gamma), ModelError);
  // Far shifts decorrelate: the moment tends to 2 Var v(t, x).
  CHECK(space_inc(1.0, 50.0) ==
        doctest::Approx(2.0 * golden::value("alpha1_golden_t1.0")).epsilon(0.05));
}

TEST_CASE("property: time increment is symmetric under (t, h) -> (t + h, -h)") {
  gen::for_all(12, 51, [](gen::Gen& g, int i) {
    auto gamma = g.temporal();
    auto mu = SpatialMeasure::riesz(g.uniform(0.3, 1.0), 1);
    double t = g.uniform(0.2, 2.0), h = g.uniform(0.01, 0.5);
    INFO("case ", i, " ", gamma.name(), " t=", t, " h=", h);
    CHECK(time_inc(t, h, mu, gamma) == doctest::Approx(time_inc(t + h, -h, mu, gamma)).epsilon(1e-7));
  });
}

TEST_CASE("property: space increment depends only on |z| in d = 2") {
  gen::for_all(6, 52, [](gen::Gen& g, int i) {
    auto mu = SpatialMeasure::riesz(g.uniform(0.5, 1.5), 2);
    double t = g.uniform(0.3, 1.5), r = g.log_uniform(0.05, 2.0);
    double a = space_increment_moment(t, {r, 0.0}, mu, golden_gamma).value;
    double b = space_increment_moment(t, g.on_sphere(2, r), mu, golden_gamma).value;
    INFO("case ", i);
    CHECK(a > 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
  });
}

TEST_CASE("property: increments shrink along halving shifts") {
  gen::for_all(6, 53, [](gen::Gen& g, int i) {
    auto gamma = g.temporal();
    double t = g.uniform(0.5, 2.0);
    double prev_t = time_inc(t, 0.4, golden_mu, gamma), prev_s = space_inc(t, 0.4);
    for (double s = 0.2; s > 0.01; s *= 0.5) {
      double vt = time_inc(t, s, golden_mu, gamma);
      double vs = space_increment_moment(t, {s}, golden_mu, gamma).value;
      INFO("case ", i, " s=", s);
      CHECK(vt < prev_t);
      CHECK(vs < prev_s);
      prev_t = vt;
      prev_s = vs;
    }
    (void)prev_s;
  });
}

TEST_CASE("increment slopes respect the regularity prediction") {
  // beta just above alpha / 2 makes 2 - 2 beta the sharpest guaranteed decay.
  const double beta = 0.55, pred = 2.0 - 2.0 * beta;
  std::vector<std::pair<double, double>> tp, sp;
  for (double s : {0.0125, 0.025, 0.05, 0.1, 0.2}) {
    tp.emplace_back(s, time_inc(1.0, s));
    sp.emplace_back(s, space_inc(1.0, s));
  }
  auto ft = holder_fit(tp), fs = holder_fit(sp);
  CHECK(ft.exponent >= pred - 0.15);
  CHECK(fs.exponent >= pred - 0.15);
  CHECK(ft.r_squared > 0.99);
  CHECK(fs.r_squared > 0.99);
}

TEST_CASE("holder_fit examples") {
  std::vector<std::pair<double, double>> p, c;
  for (double s : {0.1, 0.2, 0.4, 0.8, 1.6}) {
    p.emplace_back(s, 3.0 * std::pow(s, 1.3));
    c.emplace_back(s, 2.0);
  }
  auto f = holder_fit(p);
  CHECK(f.exponent == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holder_fit(c).exponent == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(holder_fit({p[0], p[1], p[2]}), ModelError);
  CHECK_THROWS_AS(holder_fit({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}), ModelError);
}

TEST_CASE("property: holder_fit recovers exact power laws") {
  gen::for_all(200, 54, [](gen::Gen& g, int i) {
    double e = g.uniform(-2.0, 3.0), c = g.log_uniform(1e-3, 1e3);
    std::vector<std::pair<double, double>> p;
    int n = g.integer(4, 12);
    for (int k = 0; k < n; ++k) {
      double s = g.log_uniform(1e-3, 10.0);
      p.emplace_back(s, c * std::pow(s, e));
    }
    INFO("case ", i);
    CHECK(holder_fit(p).exponent == doctest::Approx(e).scale(1.0).epsilon(1e-8));
  });
}

TEST_CASE("h3_h4_h5_verify on the golden measure") {
  IncrementGrids grids;
  grids.t_grid = {0.125, 0.25, 0.5, 1.0, 2.0};
  grids.h_grid = {0.025, 0.05, 0.1, 0.2, 0.4};
  grids.z_grid = {0.025, 0.05, 0.1, 0.2, 0.4};
  grids.eta_grid = {0.0, 0.5, 2.0};
  auto rep = h3_h4_h5_verify(golden_mu, 0.55, grids);
  for (const auto* c : {&rep.h3, &rep.h4, &rep.h5}) {
    INFO(c->name);
    CHECK(c->violations == 0);
    CHECK(c->converged);
    CHECK(c->slope_ok);
    CHECK(c->constant > 0.0);
  }
  // riesz(1, 1): the sup over eta is pi t at eta = 0, so the t slope is 1.
  CHECK(rep.h4.slope == doctest::Approx(1.0).epsilon(0.02));
  CHECK(rep.h4.sup_lhs[3] == doctest::Approx(std::acos(-1.0)).epsilon(1e-7));
  CHECK(h3_lhs(golden_mu, 1.0, 0.0, 0.5).value == 0.0);
  CHECK_THROWS_AS(h3_h4_h5_verify(golden_mu, 0.4, grids), ModelError);
  CHECK_THROWS_AS(h5_lhs(SpatialMeasure::riesz(1.0, 2), 1.0, 0.1, 1.0), ModelError);
}

TEST_CASE("h3_h4_h5_verify in d = 2") {
  IncrementGrids grids;
  grids.t_grid = {0.5, 1.0, 1.5, 2.0};
  grids.h_grid = {0.05, 0.1, 0.2, 0.4};
  grids.z_grid = {0.05, 0.1, 0.2, 0.4};
  grids.eta_grid = {0.0, 1.0};
  auto rep = h3_h4_h5_verify(SpatialMeasure::riesz(1.0, 2), 0.6, grids);
  for (const auto* c : {&rep.h3, &rep.h4, &rep.h5}) {
    INFO(c->name);
    CHECK(c->violations == 0);
    CHECK(c->converged);
    CHECK(c->slope_ok);
  }
}

TEST_CASE("increment_bound_AB examples") {
  IncrementGrids grids;
  grids.t_grid = {0.25, 0.5, 1.0, 2.0};
  grids.h_grid = {0.05, 0.1, 0.2, 0.4};
  grids.z_grid = {0.05, 0.1, 0.2, 0.4};
  grids.eta_grid = {0.0, 1.0};
  auto rep = h3_h4_h5_verify(golden_mu, 0.6, grids);
  auto zero = increment_bound_AB(1.0, 0.0, 0.6, golden_mu, golden_gamma, rep);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.A_bound == 0.0);
  CHECK(zero.holds);
  auto b = increment_bound_AB(1.0, 0.1, 0.6, golden_mu, golden_gamma, rep);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(golden::value("time_inc_golden_t1_h0.1")).epsilon(1e-8));
  auto b2 = increment_bound_AB(1.0, 0.2, 0.6, golden_mu, golden_gamma, rep);
  CHECK(b2.A_bound / b.A_bound == doctest::Approx(std::pow(2.0, 0.8)).epsilon(1e-12));
  CHECK(b2.holds);
  CHECK_THROWS_AS(increment_bound_AB(1.0, 1.5, 0.6, golden_mu, golden_gamma, rep), ModelError);
}
