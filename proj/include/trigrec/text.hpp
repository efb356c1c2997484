#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "trigrec/error.hpp"

// Locale-independent text helpers shared by the spec parsers and the CSV writers.
namespace trigrec::text {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline double parse_double(std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw Error("not a number: '" + t + "'");
    }
    return v;
}

inline long long parse_int(std::string_view s) {
    const std::string t = trim(s);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw Error("not an integer: '" + t + "'");
    }
    return v;
}

/// Shortest round-trip representation, '.' decimal point regardless of locale.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("format_double failed");
    return std::string(buf, ptr);
}

/// Splits on `sep` at parenthesis depth zero, so "a=(1,2),q=3" yields two items.
inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

/// Parses "(a,b)" or a bare scalar "a" (which is broadcast to both components).
inline std::pair<std::string, std::string> parse_pair(std::string_view s) {
    std::string t = trim(s);
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')') throw Error("unbalanced parentheses in '" + t + "'");
        auto parts = split_top_level(std::string_view(t).substr(1, t.size() - 2), ',');
        if (parts.size() != 2) throw Error("expected a pair in '" + t + "'");
        return {parts[0], parts[1]};
    }
    return {t, t};
}

}  // namespace trigrec::text
