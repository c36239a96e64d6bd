#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "lqt/polynomial.hpp"

namespace lqt
{

namespace detail
{

// Coefficients of p viewed as a polynomial in `var`; entry k multiplies var^k.
// The coefficients stay in the same ring with exponent 0 in `var`.
inline std::vector<Polynomial> coefficients_in(const Polynomial &p, std::size_t var)
{
    std::vector<std::vector<Term>> buckets(p.degree_in(var) + 1);
    for (const auto &t : p.terms()) {
        Term c = t;
        c.exponents[var] = 0;
        buckets[t.exponents[var]].push_back(std::move(c));
    }
    std::vector<Polynomial> out;
    out.reserve(buckets.size());
    for (auto &b : buckets) {
        out.push_back(Polynomial::from_terms(p.variables(), std::move(b)));
    }
    return out;
}

inline Polynomial leading_coefficient_in(const Polynomial &p, std::size_t var)
{
    const auto d = p.degree_in(var);
    std::vector<Term> terms;
    for (const auto &t : p.terms()) {
        if (t.exponents[var] == d) {
            Term c = t;
            c.exponents[var] = 0;
            terms.push_back(std::move(c));
        }
    }
    return Polynomial::from_terms(p.variables(), std::move(terms));
}

inline Exponents unit_exponent(std::size_t arity, std::size_t var, std::uint32_t k)
{
    Exponents e(arity, 0);
    e[var] = k;
    return e;
}

inline Polynomial exact_quotient(const Polynomial &a, const Polynomial &b)
{
    auto q = a.divide_exact(b);
    if (!q) {
        throw std::logic_error("internal error: inexact division in gcd");
    }
    return std::move(*q);
}

// Scales p to integer coefficients with content 1 and a positive
// leading coefficient.
inline Polynomial primitive_integer(const Polynomial &p)
{
    if (p.is_zero()) {
        return p;
    }
    Integer den = 1, num = 0;
    for (const auto &t : p.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coefficient.get_num_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (p.leading_coefficient() < 0) {
        scale = -scale;
    }
    return p * scale;
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, for the coprimality test.
struct ModP {
    static constexpr std::uint64_t p = (std::uint64_t{1} << 61) - 1;

    static std::uint64_t mul(std::uint64_t a, std::uint64_t b)
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }

    static std::uint64_t add(std::uint64_t a, std::uint64_t b)
    {
        const std::uint64_t s = a + b;
        return s >= p ? s - p : s;
    }

    static std::uint64_t sub(std::uint64_t a, std::uint64_t b)
    {
        return a >= b ? a - b : a + p - b;
    }

    static std::uint64_t pow(std::uint64_t a, std::uint64_t e)
    {
        std::uint64_t r = 1;
        while (e > 0) {
            if (e & 1) {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    static std::uint64_t inv(std::uint64_t a)
    {
        return pow(a, p - 2);
    }

    static std::optional<std::uint64_t> reduce(const Rational &q)
    {
        const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
        if (den == 0) {
            return std::nullopt;
        }
        return mul(mpz_fdiv_ui(q.get_num_mpz_t(), p), inv(den));
    }
};

// Image of p in F_p[var] after evaluating the other variables at `point`.
// Entry k multiplies var^k.
inline std::optional<std::vector<std::uint64_t>> specialize(const Polynomial &poly, std::size_t var,
                                                            const std::vector<std::uint64_t> &point)
{
    std::vector<std::uint64_t> out(poly.degree_in(var) + 1, 0);
    for (const auto &t : poly.terms()) {
        const auto c = ModP::reduce(t.coefficient);
        if (!c) {
            return std::nullopt;
        }
        std::uint64_t v = *c;
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            if (i != var && t.exponents[i] > 0) {
                v = ModP::mul(v, ModP::pow(point[i], t.exponents[i]));
            }
        }
        out[t.exponents[var]] = ModP::add(out[t.exponents[var]], v);
    }
    return out;
}

inline std::size_t univariate_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b)
{
    auto trim = [](std::vector<std::uint64_t> &v) {
        while (!v.empty() && v.back() == 0) {
            v.pop_back();
        }
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        if (a.size() >= b.size()) {
            const std::uint64_t f = ModP::mul(a.back(), ModP::inv(b.back()));
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                a[i + shift] = ModP::sub(a[i + shift], ModP::mul(f, b[i]));
            }
            trim(a);
        } else {
            std::swap(a, b);
        }
    }
    return a.empty() ? 0 : a.size() - 1;
}

// True only when gcd(a, b) is certainly constant. A specialization that keeps
// both leading coefficients in `var` bounds the gcd's degree in `var` from above.
inline bool certainly_coprime(const Polynomial &a, const Polynomial &b)
{
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::uint64_t> pick(1, ModP::p - 1);
    for (std::size_t var = 0; var < a.arity(); ++var) {
        if (a.degree_in(var) == 0 || b.degree_in(var) == 0) {
            continue;
        }
        bool settled = false;
        for (int attempt = 0; attempt < 3 && !settled; ++attempt) {
            std::vector<std::uint64_t> point(a.arity());
            for (auto &x : point) {
                x = pick(rng);
            }
            const auto ua = specialize(a, var, point), ub = specialize(b, var, point);
            if (!ua || !ub || ua->back() == 0 || ub->back() == 0) {
                continue;
            }
            if (univariate_gcd_degree(*ua, *ub) > 0) {
                return false;
            }
            settled = true;
        }
        if (!settled) {
            return false;
        }
    }
    return true;
}

inline Polynomial gcd_rec(const Polynomial &a, const Polynomial &b);

inline Polynomial content_in(const Polynomial &p, std::size_t var)
{
    auto coeffs = coefficients_in(p, var);
    Polynomial g(p.variables());
    for (const auto &c : coeffs) {
        if (c.is_zero()) {
            continue;
        }
        g = g.is_zero() ? primitive_integer(c) : gcd_rec(g, c);
        if (g.is_constant()) {
            break;
        }
    }
    return g;
}

// lc(b)^(deg a - deg b + 1) * a  mod  b, in the variable `var`.
inline Polynomial pseudo_remainder(const Polynomial &a, const Polynomial &b, std::size_t var)
{
    const auto n = b.degree_in(var);
    const Polynomial lcb = leading_coefficient_in(b, var);
    Polynomial r = a;
    long steps = static_cast<long>(a.degree_in(var)) - static_cast<long>(n) + 1;
    while (!r.is_zero() && r.degree_in(var) >= n) {
        const auto d = r.degree_in(var) - n;
        const Polynomial lcr = leading_coefficient_in(r, var);
        r = lcb * r - (lcr * b).multiply_monomial(unit_exponent(a.arity(), var, d));
        --steps;
    }
    if (steps > 0 && !r.is_zero()) {
        r = r * lcb.pow(static_cast<std::uint64_t>(steps));
    }
    return r;
}

// Subresultant remainder sequence for a, b primitive in `var`, both of
// positive degree there. Returns the primitive part of the last nonzero
// remainder.
inline Polynomial subresultant_gcd(Polynomial a, Polynomial b, std::size_t var)
{
    if (a.degree_in(var) < b.degree_in(var)) {
        std::swap(a, b);
    }
    const Symbols &vars = a.variables();
    Polynomial g = Polynomial::constant(vars, 1);
    Polynomial h = Polynomial::constant(vars, 1);
    for (;;) {
        const auto delta = a.degree_in(var) - b.degree_in(var);
        Polynomial r = pseudo_remainder(a, b, var);
        if (r.is_zero()) {
            Polynomial c = content_in(b, var);
            return exact_quotient(b, c);
        }
        if (r.degree_in(var) == 0) {
            return Polynomial::constant(vars, 1);
        }
        a = std::move(b);
        b = exact_quotient(r, g * h.pow(delta));
        g = leading_coefficient_in(a, var);
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = exact_quotient(g.pow(delta), h.pow(delta - 1));
        }
    }
}

inline Polynomial gcd_rec(const Polynomial &a, const Polynomial &b)
{
    const Symbols &vars = a.variables();
    if (a.is_zero()) {
        return primitive_integer(b);
    }
    if (b.is_zero()) {
        return primitive_integer(a);
    }
    if (a.is_constant() || b.is_constant()) {
        return Polynomial::constant(vars, 1);
    }
    const Exponents ma = a.monomial_content(), mb = b.monomial_content();
    Exponents m(ma.size());
    bool has_monomial = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = std::min(ma[i], mb[i]);
        has_monomial = has_monomial || ma[i] > 0 || mb[i] > 0;
    }
    if (has_monomial) {
        Polynomial g = gcd_rec(a.divide_monomial(ma), b.divide_monomial(mb));
        return g.multiply_monomial(m);
    }
    if (b.size() <= a.size() && a.divide_exact(b)) {
        return primitive_integer(b);
    }
    if (a.size() < b.size() && b.divide_exact(a)) {
        return primitive_integer(a);
    }
    if (certainly_coprime(a, b)) {
        return Polynomial::constant(vars, 1);
    }
    // A variable missing from one side cannot occur in the gcd; otherwise run
    // the remainder sequence in the variable of least degree.
    std::size_t var = a.arity();
    for (std::size_t i = 0; i < a.arity(); ++i) {
        const auto da = a.degree_in(i), db = b.degree_in(i);
        if (da == 0 && db > 0) {
            return gcd_rec(a, content_in(b, i));
        }
        if (db == 0 && da > 0) {
            return gcd_rec(content_in(a, i), b);
        }
        if (da > 0 && (var == a.arity() || std::max(da, db) < std::max(a.degree_in(var), b.degree_in(var)))) {
            var = i;
        }
    }
    const Polynomial ca = content_in(a, var), cb = content_in(b, var);
    const Polynomial c = gcd_rec(ca, cb);
    Polynomial g = subresultant_gcd(exact_quotient(a, ca), exact_quotient(b, cb), var);
    return primitive_integer(c * g);
}

} // namespace detail

// Greatest common divisor in Q[x_1..x_n], scaled to integer coefficients
// with content 1 and positive leading coefficient. gcd(a, 0) = a normalized.
inline Polynomial gcd(const Polynomial &a, const Polynomial &b)
{
    if (!(a.variables() == b.variables())) {
        throw std::invalid_argument("polynomials live in different rings");
    }
    return detail::gcd_rec(a, b);
}

} // namespace lqt
