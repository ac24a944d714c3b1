#pragma once

// Minimal strict CSV reader shared by every loader: mandatory header row,
// RFC 4180 quoting, CRLF tolerated, UTF-8 BOM stripped, 1-based line numbers
// carried into every ParseError.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scarf/error.hpp"

namespace scarf::csv {

struct Row {
    std::size_t line{0};
    std::vector<std::string> cells;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(cell).empty()) {
                throw ParseError(line_no, "quote inside unquoted field");
            }
            cell.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? cell : std::string(trim(cell)));
            cell.clear();
            was_quoted = false;
        } else {
            cell.push_back(c);
        }
    }
    if (quoted) {
        throw ParseError(line_no, "unterminated quoted field");
    }
    out.push_back(was_quoted ? cell : std::string(trim(cell)));
    return out;
}

} // namespace detail

/// Parses CSV text. Blank lines are skipped; every data row must have exactly
/// as many cells as the header.
inline Table parse(std::string_view text) {
    Table table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        pos = 3;
    }
    bool have_header = false;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (detail::trim(line).empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        auto cells = detail::split_line(line, line_no);
        if (!have_header) {
            std::set<std::string> seen;
            for (const auto& h : cells) {
                if (h.empty()) {
                    throw ParseError(line_no, "empty column name in header");
                }
                if (!seen.insert(h).second) {
                    throw ParseError(line_no, "duplicate column '" + h + "'");
                }
            }
            table.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != table.header.size()) {
                throw ParseError(line_no, "expected " + std::to_string(table.header.size()) + " fields, got " +
                                              std::to_string(cells.size()));
            }
            table.rows.push_back({line_no, std::move(cells)});
        }
        if (end == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw ParseError(0, "missing header row");
    }
    return table;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs a loader body, attaching `path` to any ParseError that lacks a source.
template <typename F>
auto with_source(const std::filesystem::path& path, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const ParseError& e) {
        if (!e.source().empty()) {
            throw;
        }
        throw ParseError(e.line(), e.reason(), path.string());
    }
}

inline Table read(const std::filesystem::path& path) {
    const auto text = read_file(path);
    return with_source(path, [&] { return parse(text); });
}

/// Rejects columns outside `allowed` unless they carry the `x_` extension prefix.
inline void require_known_columns(const Table& t, const std::set<std::string, std::less<>>& allowed) {
    for (const auto& h : t.header) {
        if (h.rfind("x_", 0) == 0) {
            continue;
        }
        if (!allowed.contains(h)) {
            throw ParseError(1, "unknown column '" + h + "'");
        }
    }
}

inline void require_columns(const Table& t, std::initializer_list<std::string_view> names) {
    for (auto n : names) {
        if (!t.column(n)) {
            throw ParseError(1, "missing required column '" + std::string(n) + "'");
        }
    }
}

/// Strict decimal parse: `.` separator, optional exponent, no thousands
/// separators, no trailing garbage.
inline double parse_double(std::string_view cell, std::size_t line, std::string_view column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && cell.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(line, "column '" + std::string(column) + "': not a number: '" + std::string(cell) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view cell, std::size_t line, std::string_view column) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(line, "column '" + std::string(column) + "': not an integer: '" + std::string(cell) + "'");
    }
    return v;
}

inline std::optional<double> optional_double(const Table& t, const Row& r, std::string_view column) {
    const auto idx = t.column(column);
    if (!idx || r.cells[*idx].empty()) {
        return std::nullopt;
    }
    return parse_double(r.cells[*idx], r.line, column);
}

inline const std::string& cell(const Table& t, const Row& r, std::string_view column) {
    static const std::string empty;
    const auto idx = t.column(column);
    return idx ? r.cells[*idx] : empty;
}

/// Quotes a field when it contains a delimiter, quote, or line break.
inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

} // namespace scarf::csv
