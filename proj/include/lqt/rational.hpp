#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lqt
{

// Arbitrary precision integers and rationals. mpq_class keeps its
// value canonical (gcd(num, den) = 1, den > 0) after every operation.
using Integer = mpz_class;
using Rational = mpq_class;

// "p/q", or "p" when q = 1.
inline std::string to_string(Rational q)
{
    q.canonicalize();
    return q.get_str();
}

inline std::string to_string(const Integer &z)
{
    return z.get_str();
}

// Accepts "p", "-p", "p/q" and "-p/q" with decimal digits only.
inline Rational parse_rational(std::string_view text)
{
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                return false;
            }
        }
        return true;
    };
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    Integer n{std::string(num.front() == '+' ? num.substr(1) : num)};
    Integer d{std::string(den)};
    if (d == 0) {
        throw std::invalid_argument("zero denominator in rational '" + std::string(text) + "'");
    }
    Rational q(n, d);
    q.canonicalize();
    return q;
}

} // namespace lqt
