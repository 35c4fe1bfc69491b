#pragma once

#include "incmeter/core/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace incmeter::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
inline std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1, column = 0;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        ++column;
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                    if (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '\n' && text[i + 1] != '\r')
                        throw ParseError("unexpected character after closing quote", line, column + 1);
                }
            } else {
                if (c == '\n') {
                    ++line;
                    column = 0;
                }
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started) throw ParseError("quote inside unquoted field", line, column);
            in_quotes = true;
            field_started = true;
            break;
        case ',': end_field(); break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            end_row();
            ++line;
            column = 0;
            break;
        case '\n':
            end_row();
            ++line;
            column = 0;
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", line, column);
    if (field_started || !row.empty()) end_row();
    return rows;
}

inline std::string quote(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                 (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string write(const std::vector<Row>& rows) {
    std::string out;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += quote(r[i]);
        }
        out += "\r\n";
    }
    return out;
}

} // namespace incmeter::csv
