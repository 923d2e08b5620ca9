#pragma once

#include "shiftperc/error.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace shiftperc {

using rational = boost::rational<std::int64_t>;

inline std::string to_string(const rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace detail {

inline std::int64_t parse_int(std::string_view text, std::string_view whole) {
    if (text.empty()) throw error(errc::parse_error, "not a number: '" + std::string(whole) + "'");
    std::int64_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw error(errc::parse_error, "not a number: '" + std::string(whole) + "'");
        if (value > (INT64_MAX - 9) / 10) throw error(errc::parse_error, "number too large: '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

} // namespace detail

// Accepts "3", "-1/4", "0.125"; decimals convert exactly.
inline rational parse_rational(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = detail::parse_int(text.substr(slash + 1), whole);
        if (den == 0) throw error(errc::parse_error, "zero denominator: '" + std::string(whole) + "'");
        value = rational(detail::parse_int(text.substr(0, slash), whole), den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 17) throw error(errc::parse_error, "too many decimals: '" + std::string(whole) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const auto ip = text.substr(0, dot);
        const std::int64_t int_part = ip.empty() ? 0 : detail::parse_int(ip, whole);
        const std::int64_t frac_part = frac.empty() ? 0 : detail::parse_int(frac, whole);
        value = rational(int_part) + rational(frac_part, scale);
    } else {
        value = rational(detail::parse_int(text, whole));
    }
    return negative ? -value : value;
}

} // namespace shiftperc
