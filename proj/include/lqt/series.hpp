#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lqt/rational_function.hpp"

namespace lqt
{

// Coefficients c_1, c_2, ... of a series tau = sum c_k x^k in x k[[x]].
// Every pattern is a closed form, so queries are pure and replayable.
class CoefficientStream
{
public:
    enum class Kind { exp, factorial_gap, geometric, periodic };

    // c_k = 1/k!
    static CoefficientStream exp()
    {
        return CoefficientStream(Kind::exp, {});
    }

    // c_k = 1 when k = j! for some j >= 1, else 0.
    static CoefficientStream factorial_gap()
    {
        return CoefficientStream(Kind::factorial_gap, {});
    }

    // c_k = r^(k-1).
    static CoefficientStream geometric(const Rational &r)
    {
        return CoefficientStream(Kind::geometric, {r});
    }

    // c_k = list[(k-1) mod len].
    static CoefficientStream periodic(std::vector<Rational> list)
    {
        if (list.empty()) {
            throw std::invalid_argument("periodic series needs at least one coefficient");
        }
        return CoefficientStream(Kind::periodic, std::move(list));
    }

    Kind kind() const noexcept
    {
        return kind_;
    }

    const std::vector<Rational> &parameters() const noexcept
    {
        return params_;
    }

    Rational coefficient(std::size_t k) const
    {
        if (k == 0) {
            return 0;
        }
        switch (kind_) {
        case Kind::exp: {
            Integer f = 1;
            for (std::size_t i = 2; i <= k; ++i) {
                f *= static_cast<unsigned long>(i);
            }
            return Rational(Integer(1), f);
        }
        case Kind::factorial_gap:
            return is_factorial(k) ? 1 : 0;
        case Kind::geometric: {
            Rational r = 1;
            for (std::size_t i = 1; i < k; ++i) {
                r *= params_[0];
            }
            return r;
        }
        case Kind::periodic:
            return params_[(k - 1) % params_.size()];
        }
        return 0;
    }

    // c_1 .. c_n in one pass.
    std::vector<Rational> prefix(std::size_t n) const
    {
        std::vector<Rational> out;
        out.reserve(n);
        Rational running = 1;
        for (std::size_t k = 1; k <= n; ++k) {
            switch (kind_) {
            case Kind::exp:
                running /= static_cast<unsigned long>(k);
                out.push_back(running);
                break;
            case Kind::geometric:
                out.push_back(running);
                running *= params_[0];
                break;
            default:
                out.push_back(coefficient(k));
            }
        }
        return out;
    }

    // Least k >= from with c_k != 0, searching no further than `cap`.
    std::optional<std::size_t> next_nonzero(std::size_t from, std::size_t cap = 100000) const
    {
        from = std::max<std::size_t>(from, 1);
        switch (kind_) {
        case Kind::exp:
            return from;
        case Kind::factorial_gap: {
            std::size_t f = 1;
            for (std::size_t j = 2; f < from; ++j) {
                if (f > cap) {
                    return std::nullopt;
                }
                f *= j;
            }
            return f;
        }
        case Kind::geometric:
            if (params_[0] != 0 || from == 1) {
                return from;
            }
            return std::nullopt;
        case Kind::periodic:
            for (std::size_t k = from; k < from + params_.size() && k <= cap; ++k) {
                if (coefficient(k) != 0) {
                    return k;
                }
            }
            return std::nullopt;
        }
        return std::nullopt;
    }

    std::string describe() const
    {
        switch (kind_) {
        case Kind::exp:
            return "exp";
        case Kind::factorial_gap:
            return "factorial_gap";
        case Kind::geometric:
            return "geometric(" + to_string(params_[0]) + ")";
        case Kind::periodic: {
            std::string s = "periodic(";
            for (std::size_t i = 0; i < params_.size(); ++i) {
                s += (i ? "," : "") + to_string(params_[i]);
            }
            return s + ")";
        }
        }
        return "";
    }

    friend bool operator==(const CoefficientStream &a, const CoefficientStream &b)
    {
        return a.kind_ == b.kind_ && a.params_ == b.params_;
    }

private:
    CoefficientStream(Kind kind, std::vector<Rational> params) : kind_(kind), params_(std::move(params)) {}

    static bool is_factorial(std::size_t k)
    {
        std::size_t f = 1;
        for (std::size_t j = 2; f < k; ++j) {
            f *= j;
        }
        return f == k;
    }

    Kind kind_;
    std::vector<Rational> params_;
};

// V = k[[x]] ∩ k(x, y) for y = tau(x): order of vanishing in x after
// substituting the series for `subst`.
struct SeriesDVR {
    std::string base;
    std::string subst;
    CoefficientStream stream;
    std::size_t initial_precision = 16;
    std::size_t max_precision = 1024;
};

struct SeriesValue {
    bool exact = false;
    std::int64_t value = 0;
    std::size_t precision = 0;
};

namespace detail
{

using Truncated = std::vector<Rational>;

inline Truncated truncated_mul(const Truncated &a, const Truncated &b)
{
    const std::size_t n = a.size();
    Truncated r(n, Rational(0));
    Rational prod;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; i + j < n; ++j) {
            if (b[j] == 0) {
                continue;
            }
            mpq_mul(prod.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
            r[i + j] += prod;
        }
    }
    return r;
}

// p(x, tau_N(x)) mod x^(N+1).
inline Truncated evaluate_on_series(const Polynomial &p, std::size_t base, std::size_t subst, const Truncated &tau)
{
    const std::size_t n = tau.size();
    const std::uint32_t deg = p.degree_in(subst);
    std::vector<Truncated> by_power(deg + 1, Truncated(n, Rational(0)));
    for (const auto &t : p.terms()) {
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            if (i != base && i != subst && t.exponents[i] != 0) {
                throw std::invalid_argument("series valuation applies only to the base and substituted variables");
            }
        }
        const std::uint32_t a = t.exponents[base];
        if (a < n) {
            by_power[t.exponents[subst]][a] += t.coefficient;
        }
    }
    Truncated acc = by_power[deg];
    for (std::uint32_t b = deg; b-- > 0;) {
        acc = truncated_mul(acc, tau);
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += by_power[b][i];
        }
    }
    return acc;
}

inline std::optional<std::size_t> truncated_order(const Truncated &t)
{
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] != 0) {
            return i;
        }
    }
    return std::nullopt;
}

} // namespace detail

// Decided at precision N when the truncations of numerator and
// denominator both have order <= N: the truncation error is divisible
// by tau - tau_N, hence has order > N.
inline SeriesValue series_value(const RationalFunction &f, const SeriesDVR &v, std::size_t precision)
{
    if (f.is_zero()) {
        throw std::domain_error("series value of zero");
    }
    const auto base = f.variables().index_of(v.base);
    const auto subst = f.variables().index_of(v.subst);
    if (!base || !subst) {
        throw std::invalid_argument("element does not use the series variables");
    }
    detail::Truncated tau(precision + 1, Rational(0));
    const auto coeffs = v.stream.prefix(precision);
    for (std::size_t k = 1; k <= precision; ++k) {
        tau[k] = coeffs[k - 1];
    }
    const auto on = detail::truncated_order(detail::evaluate_on_series(f.numerator(), *base, *subst, tau));
    const auto od = detail::truncated_order(detail::evaluate_on_series(f.denominator(), *base, *subst, tau));
    SeriesValue r;
    r.precision = precision;
    if (on && od) {
        r.exact = true;
        r.value = static_cast<std::int64_t>(*on) - static_cast<std::int64_t>(*od);
    }
    return r;
}

// Doubles the precision from the DVR's initial value up to its cap.
inline SeriesValue series_value_adaptive(const RationalFunction &f, const SeriesDVR &v)
{
    SeriesValue r;
    for (std::size_t n = std::max<std::size_t>(v.initial_precision, 1); n <= v.max_precision; n *= 2) {
        r = series_value(f, v, n);
        if (r.exact) {
            return r;
        }
    }
    return r;
}

} // namespace lqt
