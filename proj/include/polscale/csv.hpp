#pragma once

// Minimal RFC 4180 reader/writer: comma separated, double-quoted fields with
// "" escapes, embedded newlines allowed inside quotes.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polscale::csv {

struct Row {
    /// 1-based line on which the row starts.
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Reads every row, including the header. Throws MalformedField on an
/// unterminated quote. A trailing '\r' before the line break is dropped.
std::vector<Row> read(std::istream& in);

/// Quotes the field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Column index by header name; throws MalformedField when absent.
std::size_t column(const Row& header, std::string_view name);
/// Like column() but returns npos when absent.
std::size_t find_column(const Row& header, std::string_view name);

}  // namespace polscale::csv
