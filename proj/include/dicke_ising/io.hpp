#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dicke_ising {

inline constexpr const char* kToolName = "dicke-ising";
inline constexpr const char* kToolVersion = "0.1.0";

/// 17-significant-digit scientific notation: doubles round-trip losslessly.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

using Cell = std::variant<double, long long, bool, std::string>;

inline std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return fmt_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string out = "\"";
      for (char c : v) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
      return out;
    }
  };
  return std::visit(Visitor{}, cell);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

inline void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_field(row[i]);
    out << "\r\n";
  }
}

inline void write_json_table(const std::filesystem::path& path, const Table& table) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.header[i]] = v; }, row[i]);
    }
    arr.push_back(std::move(obj));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << arr.dump(2) << "\n";
}

/// Writes one table in the requested format and returns the file path.
inline std::filesystem::path write_table(const std::filesystem::path& dir,
                                         const std::string& stem, const std::string& format,
                                         const Table& table) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem + (format == "json" ? ".json" : ".csv"));
  if (format == "json")
    write_json_table(path, table);
  else
    write_csv(path, table);
  return path;
}

inline void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot open manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

}  // namespace dicke_ising
