#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lqt/lqt.hpp"

namespace lqt::testing
{

// Small random elements with a fixed seed; every suite seeds its own.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi)
    {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    bool coin()
    {
        return uniform(0, 1) == 1;
    }

    Rational coefficient()
    {
        int c = 0;
        while (c == 0) {
            c = uniform(-4, 4);
        }
        return uniform(0, 3) == 0 ? Rational(c, uniform(1, 3)) : Rational(c);
    }

    Polynomial polynomial(const Symbols &vars, int max_terms = 3, int max_degree = 3, bool allow_constant = true)
    {
        std::vector<Term> terms;
        const int n = uniform(1, max_terms);
        for (int i = 0; i < n; ++i) {
            Exponents e(vars.size(), 0);
            int budget = uniform(allow_constant ? 0 : 1, max_degree);
            while (budget-- > 0) {
                ++e[uniform(0, static_cast<int>(vars.size()) - 1)];
            }
            Rational c = coefficient();
            c.canonicalize();
            terms.push_back({e, c});
        }
        Polynomial p = Polynomial::from_terms(vars, terms);
        return p.is_zero() ? Polynomial::constant(vars, 1) : p;
    }

    RationalFunction element(const Symbols &vars, int max_terms = 3, int max_degree = 3)
    {
        return RationalFunction(polynomial(vars, max_terms, max_degree), polynomial(vars, max_terms, max_degree));
    }

    std::mt19937_64 &engine()
    {
        return rng_;
    }

private:
    std::mt19937_64 rng_;
};

inline Symbols syms(std::initializer_list<const char *> names)
{
    std::vector<std::string> v;
    for (auto n : names) {
        v.emplace_back(n);
    }
    return Symbols(std::move(v));
}

inline RationalFunction rf(const std::string &text, const Symbols &vars)
{
    return parse_expr(text, vars);
}

inline ValuationProgram example_program(const std::string &name)
{
    return load_example(name).program;
}

// dvr-curve carried along P = (z) with z of infinite value.
inline ValuationProgram dvr_curve_lifted()
{
    return lift_program(example_program("dvr-curve"), syms({"x", "y", "z"}), {{"z", Value::infinity()}});
}

// Polynomial N in stage-(k+1) coordinates pulled back one step: returns
// (M, Q) with N(forward images) = Q / u_p^M in stage-k coordinates, where
// the forward map is u'_p = u_p and u'_j = u_j/u_p - c_j.
inline std::pair<std::uint32_t, Polynomial> back_step(const Polynomial &N, const Directive &d, const Symbols &prev)
{
    const std::size_t dim = prev.size();
    std::uint32_t M = 0;
    for (const auto &t : N.terms()) {
        std::uint32_t s = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            if (j != d.pivot) {
                s += t.exponents[j];
            }
        }
        M = std::max(M, s);
    }
    const Polynomial up = Polynomial::variable(prev, d.pivot);
    std::vector<Polynomial> num(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const Translation *tr = d.translation_of(j);
        num[j] = Polynomial::variable(prev, j) - (tr ? up * tr->constant : Polynomial(prev));
    }
    std::vector<std::vector<Polynomial>> powers(dim);
    auto power = [&](std::size_t j, std::uint32_t k) -> const Polynomial & {
        auto &cache = powers[j];
        while (cache.size() <= k) {
            cache.push_back(cache.empty() ? Polynomial::constant(prev, 1) : cache.back() * num[j]);
        }
        return cache[k];
    };
    std::vector<Term> terms;
    for (const auto &t : N.terms()) {
        Polynomial term = Polynomial::constant(prev, t.coefficient);
        std::uint32_t s = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            if (j != d.pivot && t.exponents[j] > 0) {
                term = term * power(j, t.exponents[j]);
                s += t.exponents[j];
            }
        }
        Exponents e(dim, 0);
        e[d.pivot] = t.exponents[d.pivot] + (M - s);
        const Polynomial shifted = term.multiply_monomial(e);
        for (const auto &u : shifted.terms()) {
            terms.push_back(u);
        }
    }
    const Polynomial Q = Polynomial::from_terms(prev, std::move(terms));
    return {M, Q};
}

// g in stage-n coordinates mapped back to the original variables through
// the forward maps u'_p = u_p, u'_j = (u_j - c_j u_p)/u_p, then compared
// with f by cross multiplication. The element is kept as num/den times a
// monomial with integer exponents m.
inline bool round_trips(const RationalFunction &f, const RationalFunction &g, ChartSession &session, std::size_t n)
{
    Polynomial num = g.numerator();
    Polynomial den = g.denominator();
    std::vector<std::int64_t> m(session.original().size(), 0);
    for (std::size_t k = n; k-- > 0;) {
        const Directive &d = session.directive(k);
        const Symbols &prev = session.coords(k);
        auto [mn, qn] = back_step(num, d, prev);
        auto [md, qd] = back_step(den, d, prev);
        const Polynomial up = Polynomial::variable(prev, d.pivot);
        std::int64_t mp = m[d.pivot] + static_cast<std::int64_t>(md) - static_cast<std::int64_t>(mn);
        for (std::size_t j = 0; j < prev.size(); ++j) {
            if (j == d.pivot) {
                continue;
            }
            mp -= m[j];
            const Translation *tr = d.translation_of(j);
            if (!tr || m[j] == 0) {
                continue;
            }
            const Polynomial L = Polynomial::variable(prev, j) - up * tr->constant;
            if (m[j] > 0) {
                qn = qn * L.pow(static_cast<std::uint64_t>(m[j]));
            } else {
                qd = qd * L.pow(static_cast<std::uint64_t>(-m[j]));
            }
            m[j] = 0;
        }
        m[d.pivot] = mp;
        num = qn;
        den = qd;
    }
    Exponents pos(num.arity(), 0), neg(num.arity(), 0);
    for (std::size_t j = 0; j < m.size(); ++j) {
        (m[j] > 0 ? pos : neg)[j] = static_cast<std::uint32_t>(m[j] > 0 ? m[j] : -m[j]);
    }
    const Polynomial lhs = num.multiply_monomial(pos) * f.denominator().rebind(num.variables());
    const Polynomial rhs = f.numerator().rebind(num.variables()) * den.multiply_monomial(neg);
    return lhs == rhs;
}

// Independent transform loop on stage-local representatives (gcd route):
// a_{k+1} = a_k(images) / pivot^{ord(a_k)}, reporting ord at each stage.
inline std::vector<std::int64_t> transform_orders(const RationalFunction &a, const ValuationProgram &p, std::size_t from,
                                                  std::size_t steps)
{
    Chart chart(p.variables());
    for (std::size_t k = 0; k < from; ++k) {
        chart = apply_directive(chart, p.directive(k));
    }
    RationalFunction g = express_in_chart(a, chart);
    std::vector<std::int64_t> out;
    for (std::size_t i = 0;; ++i) {
        const std::size_t k = from + i;
        const std::int64_t o = ord_at_origin(g);
        out.push_back(o);
        if (i == steps) {
            break;
        }
        const Directive d = p.directive(k);
        const Symbols next = stage_symbols(p.variables(), k + 1);
        const auto images = step_images(d, next);
        g = g.substitute(images, next);
        const RationalFunction piv(Polynomial::variable(next, d.pivot));
        g = g / piv.pow(o);
    }
    return out;
}

} // namespace lqt::testing
