// Command-line front end: ham {check|moments|simulate|holder} [options].

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ham/config.hpp"
#include "ham/dispatch.hpp"
#include "ham/parallel.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

// Points separated by ';', coordinates by ','. In d = 1 commas also separate points.
json parse_x_grid(const std::string& text, int d) {
  json pts = json::array();
  if (d == 1 && text.find(';') == std::string::npos) {
    for (const auto& s : split(text, ',')) pts.push_back(to_double(s));
    return pts;
  }
  for (const auto& p : split(text, ';')) {
    json pt = json::array();
    for (const auto& c : split(p, ',')) pt.push_back(to_double(c));
    pts.push_back(d == 1 && pt.size() == 1 ? pt[0] : pt);
  }
  return pts;
}

json parse_list(const std::string& text) {
  json out = json::array();
  for (const auto& s : split(text, ',')) out.push_back(to_double(s));
  return out;
}

std::optional<std::size_t> env_threads() {
  const char* v = std::getenv("HAM_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) return std::nullopt;
  return static_cast<std::size_t>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral conditions, chaos moments, field simulation and increment fits for "
               "the wave equation with multiplicative Gaussian noise"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out_path;
  std::optional<std::string> format;
  app.add_option("--config", config_path, "JSON model configuration file");
  app.add_option("--seed", seed, "master seed (unsigned 64-bit)");
  app.add_option("--threads", threads, "worker threads; overrides HAM_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "output path; stdout when absent");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* check = app.add_subcommand("check", "spectral existence and regularity conditions");
  std::optional<std::string> betas;
  check->add_option("--betas", betas, "comma-separated beta values");

  auto* moments = app.add_subcommand("moments", "second-moment chaos series");
  std::optional<double> m_t, split_N;
  std::optional<int> n_max;
  std::optional<std::uint64_t> samples;
  moments->add_option("--t", m_t, "time horizon");
  moments->add_option("--n-max", n_max, "highest chaos order");
  moments->add_option("--samples", samples, "Monte Carlo samples per order");
  moments->add_option("--split-N", split_N, "series split radius N; automatic when absent");

  auto* simulate = app.add_subcommand("simulate", "random-feature simulation of v(t, x)");
  std::optional<std::string> t_grid, x_grid;
  std::optional<std::size_t> features, replicates;
  simulate->add_option("--t-grid", t_grid, "comma-separated times");
  simulate->add_option("--x-grid", x_grid, "sites: ';' between points, ',' between coordinates");
  simulate->add_option("--features", features, "number of Hermitian feature pairs");
  simulate->add_option("--replicates", replicates, "number of replicates");

  auto* holder = app.add_subcommand("holder", "increment moments and fitted exponent");
  std::optional<double> h_t, h_min, h_max, h_beta;
  std::optional<int> points;
  std::optional<std::string> mode;
  holder->add_option("--t", h_t, "base time");
  holder->add_option("--h-min", h_min, "smallest shift");
  holder->add_option("--h-max", h_max, "largest shift");
  holder->add_option("--points", points, "number of shifts (>= 4)");
  holder->add_option("--beta", h_beta, "regularity parameter in (0, 1)");
  holder->add_option("--mode", mode, "time or space")->check(CLI::IsMember({"time", "space"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ham::kExitOk : ham::kExitRejected;
  }

  ham::RunConfig cfg;
  std::optional<ham::Subcommand> sub;
  for (auto* s : app.get_subcommands()) sub = ham::subcommand_from_name(s->get_name());

  try {
    std::string text = "{}";
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) {
        std::cerr << "cannot read config file " << config_path << "\n";
        return ham::kExitRejected;
      }
      std::stringstream ss;
      ss << is.rdbuf();
      text = ss.str();
    }
    json doc = ham::parse_json_strict(text);
    if (!doc.is_object()) throw ham::ConfigError({"configuration must be a JSON object"});
    int d = 1;
    if (doc.contains("spatial") && doc["spatial"].is_object() && doc["spatial"].contains("d") &&
        doc["spatial"]["d"].is_number_integer())
      d = doc["spatial"]["d"].get<int>();

    if (seed) doc["seed"] = *seed;
    if (!out_path.empty()) doc["output"] = out_path;
    if (format) doc["format"] = *format;
    if (betas) doc["check"]["betas"] = parse_list(*betas);
    if (m_t) doc["moments"]["t"] = *m_t;
    if (n_max) doc["moments"]["n_max"] = *n_max;
    if (samples) doc["moments"]["samples"] = *samples;
    if (split_N) doc["moments"]["split_N"] = *split_N;
    if (t_grid) doc["simulate"]["t_grid"] = parse_list(*t_grid);
    if (x_grid) doc["simulate"]["x_grid"] = parse_x_grid(*x_grid, d);
    if (features) doc["simulate"]["features"] = *features;
    if (replicates) doc["simulate"]["replicates"] = *replicates;
    if (h_t) doc["holder"]["t"] = *h_t;
    if (h_min) doc["holder"]["h_min"] = *h_min;
    if (h_max) doc["holder"]["h_max"] = *h_max;
    if (points) doc["holder"]["points"] = *points;
    if (h_beta) doc["holder"]["beta"] = *h_beta;
    if (mode) doc["holder"]["mode"] = *mode;
    cfg = ham::parse_config(doc);
  } catch (const ham::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return ham::kExitRejected;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid list value: " << e.what() << "\n";
    return ham::kExitRejected;
  }

  std::size_t n_threads = 0;
  if (threads)
    n_threads = *threads;
  else if (auto env = env_threads())
    n_threads = *env;
  else if (cfg.threads)
    n_threads = *cfg.threads;
  ham::ThreadLimit limit(n_threads);

  return ham::dispatch(cfg, *sub, std::cerr);
}
