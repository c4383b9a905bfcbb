#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ccsim {

/// Exact rational time. All simulation timestamps, clock parameters and
/// protocol constants are rationals so that boundary comparisons such as
/// now >= u + a_i are exact; equality-tight parameters would be flaky in
/// floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0)
        throw std::invalid_argument("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// Canonical rendering: "num/den", reduced, denominator positive.
/// cpp_rational keeps values normalized, so this is a plain print.
inline std::string rat_str(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Human-facing rendering: integers print without the "/1".
inline std::string rat_pretty(const Rational& r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return rat_str(r);
}

/// Parses "num/den" or a bare integer string. Whitespace is not accepted.
inline std::optional<Rational> rat_parse(const std::string& s) {
    if (s.empty())
        return std::nullopt;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(s));
        }
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty())
            return std::nullopt;
        BigInt d(den);
        if (d == 0)
            return std::nullopt;
        return Rational(BigInt(num), d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Rational rat_parse_or_throw(const std::string& s, const std::string& what) {
    auto r = rat_parse(s);
    if (!r)
        throw std::invalid_argument("bad rational for " + what + ": '" + s + "'");
    return *r;
}

inline Rational rat_pow(const Rational& base, unsigned exp) {
    Rational acc(1);
    for (unsigned i = 0; i < exp; ++i)
        acc *= base;
    return acc;
}

inline const Rational& rat_min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ccsim
