#include "polscale/csv.hpp"

#include "polscale/core.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace polscale::csv {

std::vector<Row> read(std::istream& in) {
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        Row row;
        row.line = line_no;
        std::string field;
        bool quoted = false;
        bool field_was_quoted = false;
        std::size_t i = 0;
        for (;;) {
            if (i == line.size()) {
                if (quoted) {
                    // Quoted field spans a line break.
                    if (!std::getline(in, line)) {
                        throw Error(ErrorCode::MalformedField,
                                    "unterminated quoted field starting on line " + std::to_string(row.line));
                    }
                    ++line_no;
                    field.push_back('\n');
                    i = 0;
                    continue;
                }
                break;
            }
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field.push_back(c);
                }
            } else if (c == '"' && field.empty() && !field_was_quoted) {
                quoted = true;
                field_was_quoted = true;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\r' && i + 1 == line.size()) {
                // CRLF line ending
            } else {
                field.push_back(c);
            }
            ++i;
        }
        row.fields.push_back(std::move(field));
        if (row.fields.size() == 1 && row.fields[0].empty() && !field_was_quoted) continue;  // blank line
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

std::size_t find_column(const Row& header, std::string_view name) {
    auto it = std::find(header.fields.begin(), header.fields.end(), name);
    return it == header.fields.end() ? std::string::npos
                                     : static_cast<std::size_t>(it - header.fields.begin());
}

std::size_t column(const Row& header, std::string_view name) {
    const auto idx = find_column(header, name);
    if (idx == std::string::npos) {
        throw Error(ErrorCode::MalformedField, "CSV header lacks column '" + std::string(name) + "'");
    }
    return idx;
}

}  // namespace polscale::csv
