#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace magnls {

using Rational = boost::rational<long long>;

inline std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "7", "18/7", "-3/4". Throws std::invalid_argument on malformed input.
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [](std::string_view s) -> long long {
        if (s.empty()) throw std::invalid_argument("empty rational literal");
        std::size_t pos = 0;
        long long v = std::stoll(std::string(s), &pos);
        if (pos != s.size()) throw std::invalid_argument("malformed rational literal: " + std::string(s));
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    long long num = parse_int(text.substr(0, slash));
    long long den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
    return Rational(num, den);
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace magnls
