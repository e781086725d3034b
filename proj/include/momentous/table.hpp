#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "momentous/errors.hpp"

namespace momentous {

/// Named numeric columns sampled on a common time grid, plus `key = value`
/// metadata carried as comment lines when written to CSV.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::ptrdiff_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<std::ptrdiff_t>(i);
        return -1;
    }

    bool has(const std::string& name) const { return index_of(name) >= 0; }

    std::vector<double> column(const std::string& name) const {
        const auto idx = index_of(name);
        if (idx < 0) throw std::out_of_range("no column named " + name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(idx)]);
        return out;
    }

    const std::string* meta_value(const std::string& key) const {
        for (const auto& [k, v] : meta)
            if (k == key) return &v;
        return nullptr;
    }
};

/// 17 significant digits in scientific notation; round-trips exactly.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.meta) os << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
        os << '\n';
    }
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty()) throw ParseError("not a number: '" + s + "'");
    return v;
}

}  // namespace detail

/// Reads the format produced by write_csv. Comment lines that are not
/// `# key = value` are ignored; every data row must match the header width.
inline Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string s = detail::trim(line);
        if (s.empty()) continue;
        if (s.front() == '#') {
            const auto eq = s.find('=');
            if (eq != std::string::npos)
                t.meta.emplace_back(detail::trim(std::string_view(s).substr(1, eq - 1)),
                                    detail::trim(std::string_view(s).substr(eq + 1)));
            continue;
        }
        auto cells = detail::split(s, ',');
        if (t.columns.empty()) {
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(t.columns.size()) + " fields, got " +
                             std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                row.push_back(detail::parse_double(c));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw ParseError("missing header row");
    return t;
}

}  // namespace momentous
