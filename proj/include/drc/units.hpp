// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "drc/errors.hpp"

// Parsing of human-readable sizes ("4KiB"), bandwidths ("200Mb/s") and
// ranges ("1KiB:16MiB:x2").
namespace drc::units {

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::pair<double, std::string> split_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number in '" + text + "'");
    }
    std::string unit = text.substr(used);
    while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
    return {v, unit};
}

}  // namespace detail

// A plain number with no unit.
inline double parse_number(const std::string& text) {
    const auto [v, unit] = detail::split_number(text);
    if (!unit.empty() || !std::isfinite(v)) throw ConfigError("'" + text + "' is not a plain number");
    return v;
}

// Bytes. Binary suffixes: K/KiB, M/MiB, G/GiB (case-insensitive); "B" or none.
inline std::size_t parse_size(const std::string& text) {
    auto [v, unit] = detail::split_number(text);
    const std::string u = detail::lower(unit);
    double mult = 1;
    if (u.empty() || u == "b")
        mult = 1;
    else if (u == "k" || u == "kib" || u == "kb")
        mult = 1024.0;
    else if (u == "m" || u == "mib" || u == "mb")
        mult = 1024.0 * 1024.0;
    else if (u == "g" || u == "gib" || u == "gb")
        mult = 1024.0 * 1024.0 * 1024.0;
    else
        throw ConfigError("unknown size unit '" + unit + "' in '" + text + "'");
    const double bytes = v * mult;
    if (!(bytes >= 0) || bytes != std::floor(bytes)) throw ConfigError("size '" + text + "' is not a whole byte count");
    return static_cast<std::size_t>(bytes);
}

// Bits per second. Decimal suffixes: K, M, G with optional "b/s" or "bps";
// "inf" is accepted for an unconstrained link.
inline double parse_bandwidth(const std::string& text) {
    if (detail::lower(text) == "inf") return INFINITY;
    auto [v, unit] = detail::split_number(text);
    std::string u = detail::lower(unit);
    for (const char* tail : {"b/s", "bps", "bit/s"})
        if (u.size() >= std::char_traits<char>::length(tail) &&
            u.compare(u.size() - std::char_traits<char>::length(tail), std::string::npos, tail) == 0) {
            u.erase(u.size() - std::char_traits<char>::length(tail));
            break;
        }
    double mult = 1;
    if (u.empty())
        mult = 1;
    else if (u == "k")
        mult = 1e3;
    else if (u == "m")
        mult = 1e6;
    else if (u == "g")
        mult = 1e9;
    else
        throw ConfigError("unknown bandwidth unit '" + unit + "' in '" + text + "'");
    if (!(v > 0)) throw ConfigError("bandwidth '" + text + "' must be positive");
    return v * mult;
}

template <class Parse>
std::vector<double> parse_list(const std::string& text, Parse parse) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(',', pos);
        const auto tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!tok.empty()) out.push_back(static_cast<double>(parse(tok)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

// "lo:hi:xF" (geometric), "lo:hi:+S" (arithmetic) or a comma-separated list.
template <class Parse>
std::vector<double> parse_range(const std::string& text, Parse parse) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        auto v = parse_list(text, parse);
        if (v.empty()) throw ConfigError("range '" + text + "' is empty");
        return v;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("range '" + text + "' needs lo:hi:step");
    const double lo = static_cast<double>(parse(text.substr(0, c1)));
    const double hi = static_cast<double>(parse(text.substr(c1 + 1, c2 - c1 - 1)));
    const std::string step = text.substr(c2 + 1);
    if (step.size() < 2 || (step[0] != 'x' && step[0] != '+'))
        throw ConfigError("range step '" + step + "' must be xFACTOR or +INCREMENT");
    double s = 0;
    if (step[0] == 'x') {
        const auto [f, unit] = detail::split_number(step.substr(1));
        if (!unit.empty()) throw ConfigError("range factor '" + step + "' has trailing text");
        s = f;
    } else {
        s = static_cast<double>(parse(step.substr(1)));
    }
    if (step[0] == 'x' && !(s > 1)) throw ConfigError("geometric range factor must exceed 1");
    if (step[0] == '+' && !(s > 0)) throw ConfigError("arithmetic range step must be positive");
    std::vector<double> v;
    for (double x = lo; x <= hi * (1 + 1e-12); x = step[0] == 'x' ? x * s : x + s) v.push_back(x);
    if (v.empty()) throw ConfigError("range '" + text + "' is empty");
    return v;
}

}  // namespace drc::units
