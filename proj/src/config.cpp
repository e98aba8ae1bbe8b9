#include "ham/config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace ham {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Collects violations while reading one JSON object with a known key set.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {}

  //! Reports keys outside the allowed set. Must be called once per object.
  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!ok.count(it.key())) errors_.push_back(where(it.key()) + ": unknown key");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      errors_.push_back(where(key) + ": expected a number");
      return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) errors_.push_back(where(key) + ": must be finite");
  }

  template <class Int>
  void integer(const char* key, Int& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      errors_.push_back(where(key) + ": expected an integer");
      return;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = static_cast<Int>(v.get<std::uint64_t>());
        return;
      }
      if (v.get<std::int64_t>() < 0) {
        errors_.push_back(where(key) + ": must be >= 0");
        return;
      }
      out = static_cast<Int>(v.get<std::int64_t>());
    } else {
      if (v.is_number_unsigned() &&
          v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        errors_.push_back(where(key) + ": out of range");
        return;
      }
      out = static_cast<Int>(v.get<std::int64_t>());
    }
  }

  void string(const char* key, std::string& out, std::initializer_list<const char*> choices) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    std::string list;
    for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
    if (!v.is_string()) {
      errors_.push_back(where(key) + ": expected one of {" + list + "}");
      return;
    }
    std::string s = v.get<std::string>();
    for (const char* c : choices)
      if (s == c) {
        out = s;
        return;
      }
    errors_.push_back(where(key) + ": unknown value \"" + s + "\", expected one of {" + list +
                      "}");
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_array()) {
      errors_.push_back(where(key) + ": expected an array of numbers");
      return;
    }
    std::vector<double> tmp;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        errors_.push_back(where(key) + ": expected an array of finite numbers");
        return;
      }
      tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
  }

  const json* object(const char* key) {
    if (!has(key)) return nullptr;
    const json& v = obj_.at(key);
    if (!v.is_object()) {
      errors_.push_back(where(key) + ": expected an object");
      return nullptr;
    }
    return &v;
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
};

void check(bool ok, std::vector<std::string>& errors, const std::string& msg) {
  if (!ok) errors.push_back(msg);
}

void read_model(const json& doc, ModelConfig& m, std::vector<std::string>& errors) {
  Reader top(doc, "", errors);
  if (const json* t = top.object("temporal")) {
    Reader r(*t, "temporal", errors);
    r.string("kind", m.temporal_kind, {"fractional", "exponential"});
    if (m.temporal_kind == "fractional") {
      r.allow({"kind", "H"});
      r.number("H", m.H);
    } else {
      r.allow({"kind", "lambda"});
      r.number("lambda", m.lambda);
    }
  }
  if (const json* s = top.object("spatial")) {
    Reader r(*s, "spatial", errors);
    r.allow({"kind", "alpha", "d", "normalization"});
    std::string kind = "riesz";
    r.string("kind", kind, {"riesz"});
    r.number("alpha", m.alpha);
    r.integer("d", m.d);
    r.string("normalization", m.normalization, {"unit", "classical"});
  }

  if (m.temporal_kind == "fractional")
    check(m.H > 0.5 && m.H < 1.0, errors,
          "temporal.H = " + num(m.H) + " outside admissible interval (0.5, 1)");
  else
    check(m.lambda > 0.0, errors,
          "temporal.lambda = " + num(m.lambda) + " outside admissible interval (0, inf)");

  if (m.d < 1) {
    errors.push_back("spatial.d = " + std::to_string(m.d) + " must be >= 1");
    return;
  }
  const double upper = std::min(2.0, double(m.d));
  bool white = m.alpha == 1.0 && m.d == 1;
  if (!(m.alpha > 0.0 && m.alpha < upper) && !white)
    errors.push_back("spatial.alpha = " + num(m.alpha) +
                     " outside admissible interval (0, min(2, d)) = (0, " + num(upper) + ")");
  if (white && m.normalization == "classical")
    errors.push_back("spatial.normalization = classical requires alpha < d");
}

void read_grid_points(const json& v, int d, std::vector<std::vector<double>>& out,
                      std::vector<std::string>& errors) {
  const std::string where = "simulate.x_grid";
  if (!v.is_array() || v.empty()) {
    errors.push_back(where + ": expected a nonempty array");
    return;
  }
  std::vector<std::vector<double>> pts;
  for (const auto& e : v) {
    if (e.is_number() && d == 1) {
      pts.push_back({e.get<double>()});
    } else if (e.is_array() && static_cast<int>(e.size()) == d) {
      std::vector<double> p;
      for (const auto& c : e) {
        if (!c.is_number()) {
          errors.push_back(where + ": coordinates must be numbers");
          return;
        }
        p.push_back(c.get<double>());
      }
      pts.push_back(std::move(p));
    } else {
      errors.push_back(where + ": each point must be a number (d = 1) or an array of " +
                       std::to_string(d) + " numbers");
      return;
    }
    for (double c : pts.back())
      if (!std::isfinite(c)) {
        errors.push_back(where + ": coordinates must be finite");
        return;
      }
  }
  out = std::move(pts);
}

bool in_open_unit(double b) { return b > 0.0 && b < 1.0; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : ModelError(join(violations)), violations_(std::move(violations)) {}

TemporalCovariance ModelConfig::temporal() const {
  return temporal_kind == "fractional" ? TemporalCovariance::fractional(H)
                                       : TemporalCovariance::exponential(lambda);
}

SpatialMeasure ModelConfig::spatial() const {
  return SpatialMeasure::riesz(alpha, d,
                               normalization == "classical"
                                   ? SpatialMeasure::Normalization::classical
                                   : SpatialMeasure::Normalization::unit);
}

json parse_json_strict(std::string_view text) {
  std::vector<std::set<std::string>> keys;
  std::vector<std::string> errors;
  json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case json::parse_event_t::object_end:
        if (!keys.empty()) keys.pop_back();
        break;
      case json::parse_event_t::key: {
        auto k = parsed.get<std::string>();
        if (!keys.empty() && !keys.back().insert(k).second)
          errors.push_back("duplicate key \"" + k + "\"");
        break;
      }
      default:
        break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), cb);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  if (!errors.empty()) throw ConfigError(errors);
  return doc;
}

RunConfig parse_config(std::string_view text) { return parse_config(parse_json_strict(text)); }

RunConfig parse_config(const json& doc) {
  std::vector<std::string> errors;
  RunConfig cfg;
  if (!doc.is_object()) throw ConfigError({"configuration must be a JSON object"});

  Reader top(doc, "", errors);
  top.allow({"temporal", "spatial", "seed", "threads", "check", "moments", "simulate", "holder",
             "output", "format"});
  read_model(doc, cfg.model, errors);
  top.integer("seed", cfg.seed);
  if (top.has("threads")) {
    std::size_t n = 0;
    top.integer("threads", n);
    check(n >= 1, errors, "threads must be >= 1");
    cfg.threads = n;
  }
  if (top.has("output")) {
    if (doc.at("output").is_string())
      cfg.output = doc.at("output").get<std::string>();
    else
      errors.push_back("output: expected a string");
  }
  top.string("format", cfg.format, {"csv", "json"});

  if (const json* c = top.object("check")) {
    Reader r(*c, "check", errors);
    r.allow({"betas", "max_principle_beta"});
    r.numbers("betas", cfg.check.betas);
    r.number("max_principle_beta", cfg.check.max_principle_beta);
  }
  check(!cfg.check.betas.empty(), errors, "check.betas: must be nonempty");
  for (double b : cfg.check.betas)
    check(in_open_unit(b), errors,
          "check.betas: beta = " + num(b) + " outside admissible interval (0, 1)");
  check(cfg.check.max_principle_beta > 0.0, errors,
        "check.max_principle_beta = " + num(cfg.check.max_principle_beta) +
            " outside admissible interval (0, inf)");

  if (const json* m = top.object("moments")) {
    Reader r(*m, "moments", errors);
    r.allow({"t", "n_max", "samples", "split_N"});
    r.number("t", cfg.moments.t);
    r.integer("n_max", cfg.moments.n_max);
    r.integer("samples", cfg.moments.samples);
    r.number("split_N", cfg.moments.split_N);
  }
  check(cfg.moments.t >= 0.0, errors, "moments.t = " + num(cfg.moments.t) + " must be >= 0");
  check(cfg.moments.n_max >= 0 && cfg.moments.n_max <= 12, errors,
        "moments.n_max = " + std::to_string(cfg.moments.n_max) + " outside [0, 12]");
  check(cfg.moments.samples >= 1, errors, "moments.samples must be >= 1");
  check(cfg.moments.split_N >= 0.0, errors,
        "moments.split_N = " + num(cfg.moments.split_N) + " must be >= 0 (0 selects automatic)");

  bool x_given = false;
  if (const json* s = top.object("simulate")) {
    Reader r(*s, "simulate", errors);
    x_given = r.has("x_grid");
    r.allow({"t_grid", "x_grid", "features", "replicates", "tau_max", "xi_max"});
    r.numbers("t_grid", cfg.simulate.t_grid);
    if (r.has("x_grid") && cfg.model.d >= 1)
      read_grid_points(s->at("x_grid"), cfg.model.d, cfg.simulate.x_grid, errors);
    r.integer("features", cfg.simulate.features);
    r.integer("replicates", cfg.simulate.replicates);
    r.number("tau_max", cfg.simulate.tau_max);
    r.number("xi_max", cfg.simulate.xi_max);
  }
  if (!x_given && cfg.model.d > 1) cfg.simulate.x_grid = {std::vector<double>(cfg.model.d, 0.0)};
  {
    const auto& g = cfg.simulate.t_grid;
    bool ok = !g.empty();
    for (std::size_t i = 0; i < g.size(); ++i)
      ok = ok && g[i] >= 0.0 && (i == 0 || g[i] > g[i - 1]);
    check(ok, errors, "simulate.t_grid: must be nonempty, nonnegative and strictly increasing");
  }
  for (const auto& p : cfg.simulate.x_grid)
    if (static_cast<int>(p.size()) != cfg.model.d) {
      errors.push_back("simulate.x_grid: points must have dimension d = " +
                       std::to_string(cfg.model.d));
      break;
    }
  check(cfg.simulate.features >= 1, errors, "simulate.features must be >= 1");
  check(cfg.simulate.replicates >= 2, errors, "simulate.replicates must be >= 2");
  check(cfg.simulate.tau_max >= 0.0 && cfg.simulate.xi_max >= 0.0, errors,
        "simulate.tau_max and simulate.xi_max must be >= 0 (0 selects the default)");

  if (const json* h = top.object("holder")) {
    Reader r(*h, "holder", errors);
    r.allow({"t", "h_min", "h_max", "points", "beta", "mode", "exponent_tolerance"});
    r.number("t", cfg.holder.t);
    r.number("h_min", cfg.holder.h_min);
    r.number("h_max", cfg.holder.h_max);
    r.integer("points", cfg.holder.points);
    r.number("beta", cfg.holder.beta);
    r.string("mode", cfg.holder.mode, {"time", "space"});
    r.number("exponent_tolerance", cfg.holder.exponent_tolerance);
  }
  const auto& hp = cfg.holder;
  check(hp.t > 0.0, errors, "holder.t = " + num(hp.t) + " must be > 0");
  check(hp.h_min > 0.0 && hp.h_max > hp.h_min, errors,
        "holder: need 0 < h_min < h_max, got h_min = " + num(hp.h_min) +
            ", h_max = " + num(hp.h_max));
  check(hp.points >= 4, errors,
        "holder.points = " + std::to_string(hp.points) + " but the fit needs >= 4 points");
  check(in_open_unit(hp.beta), errors,
        "holder.beta = " + num(hp.beta) + " outside admissible interval (0, 1)");
  check(hp.exponent_tolerance > 0.0, errors, "holder.exponent_tolerance must be > 0");

  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

json resolved_config(const RunConfig& cfg) {
  json j;
  const auto& m = cfg.model;
  if (m.temporal_kind == "fractional")
    j["temporal"] = {{"kind", "fractional"}, {"H", m.H}};
  else
    j["temporal"] = {{"kind", "exponential"}, {"lambda", m.lambda}};
  j["spatial"] = {
      {"kind", "riesz"}, {"alpha", m.alpha}, {"d", m.d}, {"normalization", m.normalization}};
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  j["check"] = {{"betas", cfg.check.betas},
                {"max_principle_beta", cfg.check.max_principle_beta}};
  j["moments"] = {{"t", cfg.moments.t},
                  {"n_max", cfg.moments.n_max},
                  {"samples", cfg.moments.samples},
                  {"split_N", cfg.moments.split_N}};
  json pts = json::array();
  for (const auto& p : cfg.simulate.x_grid) {
    if (m.d == 1)
      pts.push_back(p[0]);
    else
      pts.push_back(p);
  }
  j["simulate"] = {{"t_grid", cfg.simulate.t_grid},      {"x_grid", pts},
                   {"features", cfg.simulate.features},  {"replicates", cfg.simulate.replicates},
                   {"tau_max", cfg.simulate.tau_max},    {"xi_max", cfg.simulate.xi_max}};
  j["holder"] = {{"t", cfg.holder.t},
                 {"h_min", cfg.holder.h_min},
                 {"h_max", cfg.holder.h_max},
                 {"points", cfg.holder.points},
                 {"beta", cfg.holder.beta},
                 {"mode", cfg.holder.mode},
                 {"exponent_tolerance", cfg.holder.exponent_tolerance}};
  return j;
}

}  // namespace ham
