#pragma once

// Number and CSV text helpers shared by the exporters.

#include <array>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace oran_aml {

/// Shortest decimal form that round-trips to the same double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

/// Display rounding for risk values: two decimals.
inline std::string format_risk(double v) {
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string canonical(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace oran_aml
