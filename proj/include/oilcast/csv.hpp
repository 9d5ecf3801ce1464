#pragma once

#include <optional>
#include <string>
#include <vector>

namespace oilcast::csv {

/// Splits one CSV line on commas. Double-quoted fields may contain commas;
/// surrounding quotes are stripped and doubled quotes unescaped. A trailing
/// '\r' (CRLF input) is dropped first.
std::vector<std::string> split_line(const std::string& line);

/// Parses a decimal number; empty or whitespace-only cells yield nullopt.
/// Malformed cells throw IngestError mentioning `context`.
std::optional<double> parse_cell(const std::string& cell, const std::string& context);

/// Formats a double with the shortest representation that round-trips.
std::string format_double(double v);

} // namespace oilcast::csv
