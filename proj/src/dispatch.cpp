#include "ham/dispatch.hpp"

#include <cmath>
#include <iostream>

#include "ham/chaos_moments.hpp"
#include "ham/conditions.hpp"
#include "ham/field_sim.hpp"
#include "ham/increments.hpp"

namespace ham {

using nlohmann::json;

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Format format_of(const RunConfig& cfg) {
  return cfg.format == "json" ? Format::json : Format::csv;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double r = std::log(hi / lo);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(r * i / (n - 1));
  out.back() = hi;
  return out;
}

}  // namespace

std::optional<Subcommand> subcommand_from_name(const std::string& name) {
  if (name == "check") return Subcommand::check;
  if (name == "moments") return Subcommand::moments;
  if (name == "simulate") return Subcommand::simulate;
  if (name == "holder") return Subcommand::holder;
  return std::nullopt;
}

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::check:
      return "check";
    case Subcommand::moments:
      return "moments";
    case Subcommand::simulate:
      return "simulate";
    case Subcommand::holder:
      return "holder";
  }
  return "";
}

json check_report(const RunConfig& cfg, bool& converged) {
  const SpatialMeasure mu = cfg.model.spatial();
  converged = true;
  json doc;
  doc["command"] = "check";
  doc["config"] = resolved_config(cfg);

  auto d = dalang_integral(mu);
  converged = converged && (!d.finite || d.converged);
  doc["dalang"] = {{"value", finite_or_null(d.value)},
                   {"finite", d.finite},
                   {"err", finite_or_null(d.error)},
                   {"converged", d.converged}};

  doc["holder"] = json::array();
  for (double beta : cfg.check.betas) {
    auto h = holder_integral(mu, beta);
    converged = converged && (!h.finite || h.converged);
    doc["holder"].push_back({{"beta", beta},
                             {"value", finite_or_null(h.value)},
                             {"finite", h.finite},
                             {"err", finite_or_null(h.error)}});
  }

  const double mp_beta = cfg.check.max_principle_beta;
  json mp = {{"beta", mp_beta}};
  if (holder_integral(mu, mp_beta).finite) {
    auto grid = default_eta_grid(mu.dim());
    auto rep = max_principle_verify(mu, mp_beta, grid);
    mp["violations"] = rep.violations;
    mp["max_excess"] = rep.max_excess;
    mp["grid_size"] = grid.size();
  } else {
    mp["violations"] = 0;
    mp["max_excess"] = nullptr;
    mp["grid_size"] = 0;
  }
  doc["max_principle"] = mp;
  return doc;
}

Table moments_table(const RunConfig& cfg, std::ostream& warnings) {
  const auto& p = cfg.moments;
  const SpatialMeasure mu = cfg.model.spatial();
  const TemporalCovariance gamma = cfg.model.temporal();
  McConfig mc;
  mc.samples = p.samples;
  auto s = second_moment_series(p.t, mu, gamma, p.n_max, p.split_N, mc, cfg.seed);

  Table tab;
  tab.command = "moments";
  tab.columns = {
      {"n", "chaos order"},
      {"alpha_estimate", "Monte Carlo estimate of alpha_n(t) = (n!)^2 |f_n|^2 (exact for n = 0)"},
      {"std_error", "standard error of alpha_estimate"},
      {"ess", "effective sample size (Sum|f|)^2 / Sum f^2; 0 for the exact n = 0 row"},
      {"upper_bound", "analytic upper bound on alpha_n(t) with the reported split N"},
      {"term", "alpha_n(t) / n!, the contribution to E|u(t,x)|^2"},
      {"partial_sum", "sum of terms 0..n"},
      {"tail_bound", "upper bound on the sum of terms beyond n"},
  };
  if (p.t == 0.0) {
    tab.rows.push_back({0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0});
    return tab;
  }
  const double a = series_ratio(mu, gamma, p.t, s.N_split);
  const double b = p.t * p.t * s.D_N / s.C_N;
  double partial = 0.0;
  for (int n = 0; n <= p.n_max; ++n) {
    partial += s.terms[n];
    double est = 1.0, se = 0.0, ess = 0.0;
    if (n > 0) {
      const auto& e = s.estimates[n - 1];
      est = e.estimate;
      se = e.std_error;
      ess = e.effective_sample_size;
      if (e.low_ess)
        warnings << "warning: n = " << n << " effective sample size " << ess << " of "
                 << e.n_samples << " samples\n";
    }
    tab.rows.push_back({double(n), est, se, ess, s.upper_bounds[n], s.terms[n], partial,
                        series_tail(n, a, b)});
  }
  return tab;
}

Table holder_table(const RunConfig& cfg, bool& converged) {
  const auto& p = cfg.holder;
  if (p.points < 4) throw ModelError("holder fit needs at least 4 points");
  const SpatialMeasure mu = cfg.model.spatial();
  const TemporalCovariance gamma = cfg.model.temporal();
  const auto scales = geometric_grid(p.h_min, p.h_max, p.points);

  std::vector<quad::Result> res(scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (p.mode == "time") {
      res[i] = time_increment_moment(p.t, scales[i], mu, gamma);
    } else {
      std::vector<double> z(mu.dim(), 0.0);
      z[0] = scales[i];
      res[i] = space_increment_moment(p.t, z, mu, gamma);
    }
  }
  converged = true;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const auto& r = res[i];
    if (!std::isfinite(r.value) || !(r.value > 0.0))
      throw NumericalError("increment moment at scale " + format_double(scales[i]) +
                           " is not a positive finite number");
    converged = converged && r.error <= 1e-6 * r.value;
    pairs.emplace_back(scales[i], r.value);
  }
  const auto fit = holder_fit(pairs);
  const double predicted = 2.0 - 2.0 * p.beta;

  Table tab;
  tab.command = "holder";
  const std::string what = p.mode == "time" ? "time shift h" : "space shift |z|";
  tab.columns = {
      {"scale", what},
      {"moment", p.mode == "time" ? "E|v(t+h,x) - v(t,x)|^2" : "E|v(t,x+z) - v(t,x)|^2"},
      {"fitted_exponent", "least-squares slope of log moment against log scale"},
      {"predicted_exponent", "2 - 2 beta, the decay the bounds guarantee"},
  };
  for (std::size_t i = 0; i < scales.size(); ++i)
    tab.rows.push_back({scales[i], res[i].value, fit.exponent, predicted});
  return tab;
}

SimulationOutput simulate_outputs(const RunConfig& cfg) {
  const auto& p = cfg.simulate;
  const SpatialMeasure mu = cfg.model.spatial();
  const TemporalCovariance gamma = cfg.model.temporal();
  FieldSpec spec;
  spec.times = p.t_grid;
  spec.sites = p.x_grid;
  spec.n_features = p.features;
  spec.n_replicates = p.replicates;
  spec.seed = cfg.seed;
  spec.tau_max = p.tau_max;
  spec.xi_max = p.xi_max;
  const FieldGrid grid = simulate_field(mu, gamma, spec);

  SimulationOutput out;
  const int d = mu.dim();
  Table& tab = out.field;
  tab.command = "simulate";
  tab.columns.push_back({"replicate", "replicate index"});
  tab.columns.push_back({"t", "time"});
  for (int c = 0; c < d; ++c) {
    std::string name = d == 1 ? "x" : "x" + std::to_string(c + 1);
    tab.columns.push_back({name, "space coordinate " + std::to_string(c + 1)});
  }
  tab.columns.push_back({"value", "simulated v(t, x)"});
  const std::size_t nt = grid.times.size(), ns = grid.sites.size();
  tab.rows.reserve(grid.n_replicates * nt * ns);
  for (std::size_t r = 0; r < grid.n_replicates; ++r)
    for (std::size_t ti = 0; ti < nt; ++ti)
      for (std::size_t si = 0; si < ns; ++si) {
        std::vector<double> row{double(r), grid.times[ti]};
        row.insert(row.end(), grid.sites[si].begin(), grid.sites[si].end());
        double v = grid.at(r, ti, si);
        out.finite = out.finite && std::isfinite(v);
        row.push_back(v);
        tab.rows.push_back(std::move(row));
      }

  json side;
  side["command"] = "simulate";
  side["config"] = resolved_config(cfg);
  const auto& tr = grid.truncation;
  side["truncation"] = {{"t_ref", tr.t_ref},
                        {"tau_max", tr.tau_max},
                        {"xi_max", tr.xi_max},
                        {"tau_mass_fraction", tr.tau_mass_fraction},
                        {"xi_mass_fraction", tr.xi_mass_fraction}};
  side["n_features"] = grid.n_features;
  side["n_replicates"] = grid.n_replicates;
  std::vector<std::pair<GridPoint, GridPoint>> diag;
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t si = 0; si < ns; ++si) diag.push_back({{ti, si}, {ti, si}});
  const auto cov = empirical_covariance(grid, diag);
  std::vector<double> target(nt, 0.0);
  for (std::size_t ti = 0; ti < nt; ++ti)
    if (grid.times[ti] > 0.0) target[ti] = alpha_n_quadrature(1, grid.times[ti], mu, gamma).value;
  side["cells"] = json::array();
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (std::size_t si = 0; si < ns; ++si) {
      const std::size_t k = ti * ns + si;
      side["cells"].push_back({{"t", grid.times[ti]},
                               {"x", grid.sites[si]},
                               {"target_variance", target[ti]},
                               {"feature_variance", grid.feature_variance[k]},
                               {"empirical_variance", finite_or_null(cov[k].value)},
                               {"std_error", finite_or_null(cov[k].std_error)}});
    }
  out.sidecar = std::move(side);
  return out;
}

int dispatch(const RunConfig& cfg, Subcommand sub, std::ostream& log) {
  try {
    const json config = resolved_config(cfg);
    switch (sub) {
      case Subcommand::check: {
        if (cfg.format != "json") log << "note: check always emits JSON\n";
        bool converged = true;
        json doc = check_report(cfg, converged);
        std::string text = render_json(doc);
        if (cfg.output.empty())
          std::cout << text << std::flush;
        else
          write_atomic(cfg.output, text);
        if (!converged) {
          log << "error: a spectral integral did not reach its tolerance\n";
          return kExitNumerical;
        }
        return kExitOk;
      }
      case Subcommand::moments: {
        Table tab = moments_table(cfg, log);
        emit_report(tab, config, format_of(cfg), cfg.output);
        return kExitOk;
      }
      case Subcommand::holder: {
        bool converged = true;
        Table tab = holder_table(cfg, converged);
        emit_report(tab, config, format_of(cfg), cfg.output);
        if (!converged) log << "warning: some increment quadratures missed their tolerance\n";
        return kExitOk;
      }
      case Subcommand::simulate: {
        SimulationOutput out = simulate_outputs(cfg);
        if (!out.finite) {
          log << "error: simulated field contains non-finite values\n";
          return kExitNumerical;
        }
        emit_report(out.field, config, format_of(cfg), cfg.output);
        if (!cfg.output.empty()) write_atomic(cfg.output + ".json", render_json(out.sidecar));
        return kExitOk;
      }
    }
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return kExitRejected;
  } catch (const ModelError& e) {
    log << "model rejected: " << e.what() << "\n";
    return kExitRejected;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << "\n";
    return kExitRejected;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitRejected;
}

}  // namespace ham
