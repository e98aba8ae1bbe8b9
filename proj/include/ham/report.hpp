#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ham {

//! Output file could not be written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Shortest decimal that round-trips to the same double; nan, inf, -inf otherwise.
std::string format_double(double x);

struct Column {
  std::string name;
  std::string description;  //!< meaning and unit
};

struct Table {
  std::string command;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
};

/*!
 * CSV with a '#' comment header: command, resolved config as one line of
 * JSON, then one line per column describing its meaning.
 */
std::string render_csv(const Table& table, const nlohmann::json& config);

//! {"command", "config", "columns": [{name, description}], "rows": [[...]]}.
std::string render_json(const Table& table, const nlohmann::json& config);

//! JSON text with a trailing newline; non-finite numbers become null.
std::string render_json(const nlohmann::json& doc);

//! Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

enum class Format { csv, json };

//! Renders and writes a table; an empty path writes to stdout.
void emit_report(const Table& table, const nlohmann::json& config, Format format,
                 const std::string& path);

}  // namespace ham
