#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "metricforge/core.hpp"

namespace metricforge {

using json = nlohmann::json;

// JSON space format:
//   {"points": [labels], "dist": [[...]], "coords"?: [[...]], "mass"?: [...],
//    "mass_dimension"?: Q0, "boundary"?: [indices]}
// Doubles are written in shortest round-trip form.
inline json to_json(const FiniteMetricSpace& m) {
  const std::size_t n = m.size();
  json j;
  j["points"] = m.labels();
  json dist = json::array();
  for (Index i = 0; i < n; ++i) {
    const auto row = m.row(i);
    dist.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["dist"] = std::move(dist);
  if (m.coords()) j["coords"] = *m.coords();
  if (m.mass()) j["mass"] = *m.mass();
  if (m.mass_dimension()) j["mass_dimension"] = *m.mass_dimension();
  if (m.boundary()) j["boundary"] = *m.boundary();
  return j;
}

inline FiniteMetricSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dist"))
    throw StructuralError("space JSON needs 'points' and 'dist'");
  try {
    SpaceData data;
    data.labels = j.at("points").get<std::vector<std::string>>();
    const std::size_t n = data.labels.size();
    const auto& rows = j.at("dist");
    if (!rows.is_array() || rows.size() != n) throw StructuralError("'dist' must have one row per point");
    data.dist.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) throw StructuralError("'dist' must be square");
      for (const auto& v : row) data.dist.push_back(v.get<double>());
    }
    if (j.contains("coords")) data.coords = j.at("coords").get<std::vector<Point>>();
    if (j.contains("mass")) data.mass = j.at("mass").get<std::vector<double>>();
    if (j.contains("mass_dimension")) data.mass_dimension = j.at("mass_dimension").get<double>();
    if (j.contains("boundary")) data.boundary = j.at("boundary").get<std::vector<Index>>();
    return FiniteMetricSpace(std::move(data));
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed space JSON: ") + e.what());
  }
}

// CSV distance matrix: a header row of labels, then one row per point.
// Values are written with 17 significant digits.
inline std::string to_csv(const FiniteMetricSpace& m) {
  std::string out;
  for (Index i = 0; i < m.size(); ++i) {
    if (m.label(i).find_first_of(",\"\n") != std::string::npos)
      throw StructuralError("label '" + m.label(i) + "' cannot be written to CSV");
    if (i) out += ',';
    out += m.label(i);
  }
  out += '\n';
  char buf[40];
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m.d(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline FiniteMetricSpace space_from_csv(std::string_view text) {
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.remove_suffix(1);
      while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
      cells.emplace_back(cell);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw StructuralError("CSV has no header row");
  SpaceData data;
  data.labels = split(lines[0]);
  const std::size_t n = data.labels.size();
  if (lines.size() - 1 != n) throw StructuralError("CSV must have one row per label");
  data.dist.reserve(n * n);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != n) throw StructuralError("CSV row " + std::to_string(r) + " has the wrong length");
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (...) {
        throw StructuralError("bad CSV number '" + c + "'");
      }
      if (used != c.size()) throw StructuralError("bad CSV number '" + c + "'");
      data.dist.push_back(v);
    }
  }
  return FiniteMetricSpace(std::move(data));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write '" + path + "'");
  out << content;
}

inline bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Format chosen by extension: ".csv" is a distance matrix, anything else JSON.
inline FiniteMetricSpace load_space(const std::string& path) {
  const auto text = read_file(path);
  if (has_suffix(path, ".csv")) return space_from_csv(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError("'" + path + "' is not valid JSON: " + e.what());
  }
  return space_from_json(j);
}

inline void save_space(const std::string& path, const FiniteMetricSpace& m) {
  if (has_suffix(path, ".csv"))
    write_file(path, to_csv(m));
  else
    write_file(path, to_json(m).dump(1) + "\n");
}

}  // namespace metricforge
