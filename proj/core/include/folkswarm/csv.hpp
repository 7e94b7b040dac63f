#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace folkswarm::csv {

/// Quotes a field when it contains a comma, quote or line break (RFC 4180).
std::string escape(std::string_view field);

/// Writes one record terminated by '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Splits one record. Quoted fields may contain commas and doubled quotes but
/// not line breaks. Throws InputError on an unterminated quote.
std::vector<std::string> split_row(std::string_view line);

/// Shortest round-trip-safe rendering with 9 significant digits.
std::string format_real(double value);

}  // namespace folkswarm::csv
