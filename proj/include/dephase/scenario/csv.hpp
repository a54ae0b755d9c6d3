#pragma once

// RFC-4180 style tables: comma separated, LF line endings, fields quoted
// only when they contain a comma, quote or newline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "dephase/error.hpp"

namespace dephase::scenario {

inline std::string format_number(double x, int precision) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

inline std::string quote_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    if (row.size() != header.size()) throw Error("csv row width does not match header in " + name);
    rows.push_back(std::move(row));
  }

  std::string render(int precision) const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += quote_field(header[i]);
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_number(row[i], precision);
      }
      out += '\n';
    }
    return out;
  }

  std::size_t column(std::string_view label) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == label) return i;
    }
    throw Error("no column '" + std::string(label) + "' in " + name);
  }

  std::vector<double> values(std::string_view label) const {
    const std::size_t c = column(label);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
  }
};

inline std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& file,
                                        const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = dir / file;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("failed writing " + path.string());
  return path;
}

}  // namespace dephase::scenario
