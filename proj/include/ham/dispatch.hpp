#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ham/config.hpp"
#include "ham/report.hpp"

namespace ham {

enum class Subcommand { check, moments, simulate, holder };

std::optional<Subcommand> subcommand_from_name(const std::string& name);
std::string subcommand_name(Subcommand s);

//! Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitNumerical = 2;

//! Condition report: dalang, holder and max_principle blocks plus the config.
nlohmann::json check_report(const RunConfig& cfg, bool& converged);

//! Rows n = 0..n_max of the second-moment series (one row when t = 0).
Table moments_table(const RunConfig& cfg, std::ostream& warnings);

//! Increment moments on a geometric grid of scales with the fitted exponent.
Table holder_table(const RunConfig& cfg, bool& converged);

struct SimulationOutput {
  Table field;              //!< long format: replicate, t, x..., value
  nlohmann::json sidecar;   //!< truncation and variance diagnostics
  bool finite = true;
};

SimulationOutput simulate_outputs(const RunConfig& cfg);

/*!
 * Runs one subcommand and writes its artifacts. Returns 0 on success, 1 on
 * model rejection, usage or I/O errors, 2 on numerical failure. Messages go
 * to the given stream.
 */
int dispatch(const RunConfig& cfg, Subcommand sub, std::ostream& log);

}  // namespace ham
