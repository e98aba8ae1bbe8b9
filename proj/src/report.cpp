#include "ham/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <system_error>

#include <unistd.h>

namespace ham {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string render_csv(const Table& table, const json& config) {
  std::string out;
  out += "# ham " + table.command + "\n";
  out += "# config: " + config.dump() + "\n";
  for (const auto& c : table.columns) out += "# " + c.name + ": " + c.description + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out += (i ? "," : "") + table.columns[i].name;
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& table, const json& config) {
  json doc;
  doc["command"] = table.command;
  doc["config"] = config;
  doc["columns"] = json::array();
  for (const auto& c : table.columns)
    doc["columns"].push_back({{"name", c.name}, {"description", c.description}});
  doc["rows"] = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) r.push_back(finite_or_null(v));
    doc["rows"].push_back(std::move(r));
  }
  return render_json(doc);
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

void emit_report(const Table& table, const json& config, Format format,
                 const std::string& path) {
  std::string text =
      format == Format::csv ? render_csv(table, config) : render_json(table, config);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  write_atomic(path, text);
}

}  // namespace ham
