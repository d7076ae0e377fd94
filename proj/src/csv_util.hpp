#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "wflo/error.hpp"

namespace wflo::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view field, const std::string& where) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw Error(where + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

/// Data rows of a CSV file with the given header; comment and blank lines
/// are skipped. Each row is returned with its 1-based line number.
struct CsvRow {
  std::size_t line = 0;
  std::vector<double> values;
};

inline std::vector<CsvRow> read_numeric_csv(const std::string& path,
                                            const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split(view);
    if (!seen_header) {
      bool ok = fields.size() == header.size();
      for (std::size_t i = 0; ok && i < header.size(); ++i) ok = fields[i] == header[i];
      if (!ok) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw Error(path + ":" + std::to_string(line_no) + ": expected header '" +
                    expected + "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(path + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " fields");
    }
    CsvRow row{line_no, {}};
    for (const auto f : fields) {
      row.values.push_back(parse_double(f, path + ":" + std::to_string(line_no)));
    }
    rows.push_back(std::move(row));
  }
  if (!seen_header) throw Error(path + ": missing header");
  return rows;
}

}  // namespace wflo::detail
