#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sapred/common.hpp"

namespace sapred {

// Floats on disk carry 17 significant digits so values round-trip exactly.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) throw Error("bad number '" + std::string(s) + "' in " + context);
    return v;
}

inline long parse_long(std::string_view s, const std::string& context) {
    long v = 0;
    const char* first = s.data();
    while (first != s.data() + s.size() && *first == ' ') ++first;
    auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc()) throw Error("bad integer '" + std::string(s) + "' in " + context);
    return v;
}

// Splits one CSV line. Fields containing commas must be double-quoted; quotes
// inside quoted fields are doubled. Good enough for our own formats plus the
// JSON payload column of event files.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Whole-file slurp; CSV files in this project are line-oriented and parsed
// with string_views into this buffer.
inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed for " + path);
}

// Calls fn(line_number, line) for each line, skipping a trailing empty line.
template <typename Fn>
inline void for_each_line(std::string_view content, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++lineno;
        if (!(line.empty() && end == content.size())) fn(lineno, line);
        pos = end + 1;
    }
}

}  // namespace sapred
