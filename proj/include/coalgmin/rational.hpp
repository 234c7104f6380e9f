#pragma once

#include <coalgmin/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

namespace coalgmin {

/// Exact arbitrary-precision rational scalar. Always kept in lowest terms
/// with a positive denominator, so operator== is true equality of fractions.
using rational = boost::multiprecision::cpp_rational;
using integer = boost::multiprecision::cpp_int;

inline bool is_integral(const rational& r) { return denominator(r) == 1; }

/// Render as "p" when the denominator is 1 and as "p/q" otherwise,
/// with the sign always on the numerator.
inline std::string format_rational(const rational& r) {
    std::string out = numerator(r).str();
    if (!is_integral(r))
        out += "/" + denominator(r).str();
    return out;
}

/// Parse "p" or "p/q" with optional leading '-' on p and a positive q.
/// Anything else (whitespace, '+', empty parts, zero denominator) is rejected.
inline rational parse_rational(const std::string& text) {
    auto fail = [&] { throw validation_error("malformed rational literal: \"" + text + "\""); };

    std::size_t pos = 0;
    if (pos < text.size() && text[pos] == '-')
        ++pos;
    std::size_t num_begin = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
    if (pos == num_begin)
        fail();
    integer num(text.substr(0, pos));

    if (pos == text.size())
        return rational(num);

    if (text[pos] != '/')
        fail();
    ++pos;
    std::size_t den_begin = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
    if (pos == den_begin || pos != text.size())
        fail();
    integer den(text.substr(den_begin));
    if (den == 0)
        fail();
    return rational(num, den);
}

} // namespace coalgmin
