#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tprof::csv {

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
/// Throws DataError on an unterminated quote.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Fixed-point rendering used by every numeric CSV column.
std::string fixed(double value, int decimals = 6);

} // namespace tprof::csv
