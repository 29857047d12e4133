// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fvdlens {

inline constexpr int kReportVersion = 1;

/// Shortest of %g-style formatting at 6 significant digits, locale
/// independent; "-0" prints as "0".
std::string format_number(double value, int significant_digits = 6);

/// Canonical JSON: object keys sorted, 2-space indent, floating point values
/// at 6 significant digits, non-finite values as null. Ends with a newline.
std::string canonical_json(const nlohmann::json& value);

/// (after - before) / before * 100. Zero when both are zero, nullopt when
/// `before` is zero and `after` is not (or either is non-finite).
std::optional<double> percent_change(double before, double after);

/// Fixed-decimal percentage with explicit sign, e.g. "+16.8%", "-8.84%".
std::string format_percent(double pct, int decimals);

/// JSON number or null.
nlohmann::json optional_number(const std::optional<double>& value);

/// Renders rows as an aligned plain-text table (first row is the header).
std::string aligned_table(const std::vector<std::vector<std::string>>& rows);

/// RFC 4180-style CSV; fields with commas, quotes or newlines are quoted.
std::string csv_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace fvdlens
