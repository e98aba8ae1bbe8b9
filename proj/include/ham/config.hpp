#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ham/covariance.hpp"
#include "ham/errors.hpp"

namespace ham {

//! Rejected configuration; carries every violation found, not just the first.
class ConfigError : public ModelError {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct ModelConfig {
  std::string temporal_kind = "fractional";  //!< fractional | exponential
  double H = 0.75;
  double lambda = 1.0;
  double alpha = 1.0;
  int d = 1;
  std::string normalization = "unit";  //!< unit | classical

  TemporalCovariance temporal() const;
  SpatialMeasure spatial() const;
};

struct CheckParams {
  std::vector<double> betas{0.25, 0.5, 0.75};
  double max_principle_beta = 1.0;
};

struct MomentsParams {
  double t = 1.0;
  int n_max = 4;
  std::uint64_t samples = 100'000;
  double split_N = 0.0;  //!< 0 selects the automatic split
};

struct SimulateParams {
  std::vector<double> t_grid{1.0};
  std::vector<std::vector<double>> x_grid{{0.0}};
  std::size_t features = 8192;
  std::size_t replicates = 1000;
  double tau_max = 0.0;  //!< 0 selects the default radius
  double xi_max = 0.0;
};

struct HolderParams {
  double t = 1.0;
  double h_min = 0.05;
  double h_max = 0.4;
  int points = 5;
  double beta = 0.5;
  std::string mode = "time";  //!< time | space
  double exponent_tolerance = 0.15;
};

struct RunConfig {
  ModelConfig model;
  std::uint64_t seed = 0;
  std::optional<std::size_t> threads;
  CheckParams check;
  MomentsParams moments;
  SimulateParams simulate;
  HolderParams holder;
  std::string output;            //!< empty writes to stdout
  std::string format = "csv";    //!< csv | json
};

//! Parses JSON text, rejecting duplicate keys and syntax errors.
nlohmann::json parse_json_strict(std::string_view text);

//! Validates a JSON object against the strict config schema.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(std::string_view text);
inline RunConfig parse_config(const char* text) { return parse_config(std::string_view(text)); }

/*!
 * Resolved configuration with every default filled in. Thread count and
 * output path are left out so that reports do not depend on them.
 */
nlohmann::json resolved_config(const RunConfig& cfg);

}  // namespace ham
