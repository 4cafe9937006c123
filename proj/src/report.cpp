#include "stokeslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace stokeslab {

const char* kVersion = "stokes-lab 0.1.0";

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// eoc of column c between consecutive rows; NaN when undefined
double row_eoc(const ExperimentResult& r, std::size_t row, int c) {
  if (row == 0) return std::numeric_limits<double>::quiet_NaN();
  const double e0 = r.rows[row - 1].values[c], e1 = r.rows[row].values[c];
  const double h0 = r.rows[row - 1].h, h1 = r.rows[row].h;
  if (!(e0 > 0.0) || !(e1 > 0.0) || !(h0 > h1))
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(e0 / e1) / std::log(h0 / h1);
}

}  // namespace

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "level,h,dofs";
  for (const auto& c : r.columns) out << "," << c;
  for (int c : r.eoc_of) out << ",eoc_" << r.columns[c];
  out << "\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const LevelRow& row = r.rows[i];
    out << row.level << "," << num(row.h) << "," << row.dofs;
    for (double v : row.values) out << "," << num(v);
    for (int c : r.eoc_of) {
      const double e = row_eoc(r, i, c);
      out << ",";
      if (!std::isnan(e)) out << num(e);
    }
    out << "\n";
  }
  return out.str();
}

std::string to_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.name;
  j["version"] = kVersion;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : r.info) cfg[k] = v;
  j["config"] = cfg;
  j["columns"] = r.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const LevelRow& row = r.rows[i];
    nlohmann::ordered_json jr;
    jr["level"] = row.level;
    jr["h"] = row.h;
    jr["dofs"] = row.dofs;
    nlohmann::ordered_json vals;
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      vals[r.columns[c]] = row.values[c];
    jr["values"] = vals;
    if (!r.eoc_of.empty() && i > 0) {
      nlohmann::ordered_json eocs;
      for (int c : r.eoc_of) {
        const double e = row_eoc(r, i, c);
        if (!std::isnan(e)) eocs["eoc_" + r.columns[c]] = e;
      }
      jr["eoc"] = eocs;
    }
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string render_table(const ExperimentResult& r) {
  std::vector<std::string> headers = {"level", "h", "dofs"};
  for (const auto& c : r.columns) headers.push_back(c);
  for (int c : r.eoc_of) headers.push_back("eoc_" + r.columns[c]);

  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const LevelRow& row = r.rows[i];
    std::vector<std::string> line = {std::to_string(row.level), num(row.h),
                                     std::to_string(row.dofs)};
    for (double v : row.values) line.push_back(num(v));
    for (int c : r.eoc_of) {
      const double e = row_eoc(r, i, c);
      line.push_back(std::isnan(e) ? "-" : num(e));
    }
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  out << "# " << r.name << "\n";
  for (std::size_t c = 0; c < headers.size(); ++c) {
    out << (c ? "  " : "");
    out << headers[c] << std::string(width[c] - headers[c].size(), ' ');
  }
  out << "\n";
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < headers.size(); ++c) {
      out << (c ? "  " : "");
      out << line[c] << std::string(width[c] - line[c].size(), ' ');
    }
    out << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace stokeslab
