// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/report_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fvdlens {

std::string format_number(double value, int significant_digits) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                 significant_digits);
  return std::string(buf, res.ptr);
}

namespace {

void escape_string(const std::string& s, std::string& out) {
  // nlohmann's dump() escapes control characters and keeps UTF-8 as-is.
  out += nlohmann::json(s).dump();
}

void write_canonical(const nlohmann::json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      std::vector<std::string> keys;
      for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
      std::sort(keys.begin(), keys.end());
      out += "{\n";
      for (std::size_t i = 0; i < keys.size(); ++i) {
        out += inner;
        escape_string(keys[i], out);
        out += ": ";
        write_canonical(v.at(keys[i]), indent + 1, out);
        out += i + 1 < keys.size() ? ",\n" : "\n";
      }
      out += pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += inner;
        write_canonical(v[i], indent + 1, out);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    case nlohmann::json::value_t::string:
      escape_string(v.get<std::string>(), out);
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  write_canonical(value, 0, out);
  out += "\n";
  return out;
}

std::optional<double> percent_change(double before, double after) {
  if (!std::isfinite(before) || !std::isfinite(after)) return std::nullopt;
  if (before == 0.0) {
    if (after == 0.0) return 0.0;
    return std::nullopt;
  }
  return (after - before) / before * 100.0;
}

std::string format_percent(double pct, int decimals) {
  if (!std::isfinite(pct)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.*f%%", decimals, pct);
  std::string s(buf);
  // "-0.0%" reads oddly; print zero with a plus sign.
  const double rounded = std::round(pct * std::pow(10.0, decimals));
  if (rounded == 0.0 && s.front() == '-') s.front() = '+';
  return s;
}

nlohmann::json optional_number(const std::optional<double>& value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (row.size() > widths.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) line += "  ";
      const std::string& cell = rows[r][i];
      // First column left-aligned, numbers right-aligned.
      if (i == 0) {
        line += cell + std::string(widths[i] - cell.size(), ' ');
      } else {
        line += std::string(widths[i] - cell.size(), ' ') + cell;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i > 0 ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

std::string csv_table(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      const std::string& cell = row[i];
      if (cell.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char c : cell) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += cell;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace fvdlens
