#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rabi/core.hpp"

namespace rabi::io {

// ---------------------------------------------------------------------------
// Numbers and ranges
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form; locale independent. NaN -> "nan".
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view s, const std::string& what) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    const char* end = s.data() + s.size();
    const char* first = s.data();
    if (first != end && *first == '+') ++first;
    const auto r = std::from_chars(first, end, v);
    if (r.ec != std::errc() || r.ptr != end || s.empty()) throw ValidationError("cannot parse " + what + ": '" + std::string(s) + "'");
    return v;
}

/// A single value or an inclusive uniform grid min:max:steps (steps >= 2).
struct Range {
    double lo{0}, hi{0};
    int steps{1};

    bool is_scan() const { return steps > 1; }
    std::vector<double> values() const {
        std::vector<double> v(steps);
        for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
        if (steps > 1) v.back() = hi;
        return v;
    }
    std::string text() const {
        if (steps == 1) return format_number(lo);
        return format_number(lo) + ":" + format_number(hi) + ":" + std::to_string(steps);
    }
};

inline Range parse_range(const std::string& s, const std::string& what) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    Range r;
    if (parts.size() == 1) {
        r.lo = r.hi = parse_number(parts[0], what);
        if (!std::isfinite(r.lo)) throw ValidationError(what + " must be finite");
        return r;
    }
    if (parts.size() != 3) throw ValidationError(what + " must be a value or min:max:steps");
    r.lo = parse_number(parts[0], what);
    r.hi = parse_number(parts[1], what);
    const double steps = parse_number(parts[2], what + " steps");
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw ValidationError(what + " bounds must be finite");
    if (steps != std::floor(steps) || steps < 2 || steps > 1e7) throw ValidationError(what + " steps must be an integer >= 2");
    if (!(r.hi > r.lo)) throw ValidationError(what + " range must satisfy min < max");
    r.steps = static_cast<int>(steps);
    return r;
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;  // emitted as "# key=value"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
    void add_meta(const std::string& k, double v) { meta.emplace_back(k, format_number(v)); }
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.meta) os << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

/// Meta values that parse as numbers are written as JSON numbers; non-finite cells become null.
inline void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json j;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) {
        double x = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
        if (!v.empty() && r.ec == std::errc() && r.ptr == v.data() + v.size() && std::isfinite(x))
            j["meta"][k] = x;
        else
            j["meta"][k] = v;
    }
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double x : row) {
            if (std::isfinite(x))
                r.push_back(x);
            else
                r.push_back(nullptr);
        }
        j["rows"].push_back(std::move(r));
    }
    os << j.dump(1) << '\n';
}

/// Inverse of write_csv.
inline Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ValidationError("malformed header line: " + line);
            t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
        } else if (!have_header) {
            t.columns = split(line);
            have_header = true;
        } else if (!line.empty()) {
            std::vector<double> row;
            for (const auto& cell : split(line)) row.push_back(parse_number(cell, "csv cell"));
            if (row.size() != t.columns.size()) throw ValidationError("csv row width mismatch");
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Error lines
// ---------------------------------------------------------------------------

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + '"';
}

/// One line: error=<kind> message="<escaped>"
inline std::string error_line(const std::string& kind, const std::string& message) {
    return "error=" + kind + " message=" + quote(message);
}

}  // namespace rabi::io
