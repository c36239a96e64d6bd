#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lqt/rational.hpp"

namespace lqt
{

// An ordered list of variable names shared between polynomials of one
// ring. Copies are cheap; equality compares the names.
class Symbols
{
public:
    Symbols() : names_(std::make_shared<const std::vector<std::string>>()) {}

    explicit Symbols(std::vector<std::string> names)
    {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) {
                throw std::invalid_argument("empty variable name");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (names[i] == names[j]) {
                    throw std::invalid_argument("duplicate variable name '" + names[i] + "'");
                }
            }
        }
        names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    }

    std::size_t size() const noexcept
    {
        return names_->size();
    }

    const std::string &operator[](std::size_t i) const
    {
        return (*names_)[i];
    }

    const std::vector<std::string> &names() const noexcept
    {
        return *names_;
    }

    std::optional<std::size_t> index_of(std::string_view name) const
    {
        for (std::size_t i = 0; i < names_->size(); ++i) {
            if ((*names_)[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const Symbols &a, const Symbols &b)
    {
        return a.names_ == b.names_ || *a.names_ == *b.names_;
    }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

using Exponents = std::vector<std::uint32_t>;

namespace detail
{

inline std::uint64_t degree(const Exponents &e)
{
    std::uint64_t d = 0;
    for (auto x : e) {
        d += x;
    }
    return d;
}

// Graded lexicographic order, variables ranked by their position.
inline bool grlex_greater(const Exponents &a, const Exponents &b)
{
    const auto da = degree(a), db = degree(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline std::uint32_t checked_add(std::uint32_t a, std::uint32_t b)
{
    const std::uint64_t s = std::uint64_t(a) + b;
    if (s > std::numeric_limits<std::uint32_t>::max()) {
        throw std::overflow_error("polynomial exponent overflow");
    }
    return static_cast<std::uint32_t>(s);
}

inline Exponents add(const Exponents &a, const Exponents &b)
{
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = checked_add(a[i], b[i]);
    }
    return r;
}

inline bool divides(const Exponents &a, const Exponents &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

struct ExponentsHash {
    std::size_t operator()(const Exponents &e) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : e) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

struct Term {
    Exponents exponents;
    Rational coefficient;
};

// Sparse multivariate polynomial over the rationals. Terms are kept in
// descending graded lexicographic order with no zero coefficients, so
// structural equality is mathematical equality.
class Polynomial
{
public:
    explicit Polynomial(Symbols vars = Symbols{}) : vars_(std::move(vars)) {}

    static Polynomial constant(Symbols vars, const Rational &c)
    {
        Polynomial p(std::move(vars));
        if (c != 0) {
            p.terms_.push_back({Exponents(p.vars_.size(), 0), c});
        }
        return p;
    }

    static Polynomial variable(Symbols vars, std::size_t index)
    {
        if (index >= vars.size()) {
            throw std::out_of_range("variable index out of range");
        }
        Exponents e(vars.size(), 0);
        e[index] = 1;
        return monomial(std::move(vars), std::move(e));
    }

    static Polynomial monomial(Symbols vars, Exponents exps, const Rational &c = 1)
    {
        if (exps.size() != vars.size()) {
            throw std::invalid_argument("exponent vector length does not match variable count");
        }
        Polynomial p(std::move(vars));
        if (c != 0) {
            p.terms_.push_back({std::move(exps), c});
        }
        return p;
    }

    // Sorts, merges duplicates and drops zero coefficients.
    static Polynomial from_terms(Symbols vars, std::vector<Term> terms)
    {
        Polynomial p(std::move(vars));
        for (const auto &t : terms) {
            if (t.exponents.size() != p.vars_.size()) {
                throw std::invalid_argument("exponent vector length does not match variable count");
            }
        }
        std::sort(terms.begin(), terms.end(),
                  [](const Term &a, const Term &b) { return detail::grlex_greater(a.exponents, b.exponents); });
        for (auto &t : terms) {
            if (!p.terms_.empty() && p.terms_.back().exponents == t.exponents) {
                p.terms_.back().coefficient += t.coefficient;
            } else {
                if (!p.terms_.empty() && p.terms_.back().coefficient == 0) {
                    p.terms_.pop_back();
                }
                p.terms_.push_back(std::move(t));
            }
        }
        if (!p.terms_.empty() && p.terms_.back().coefficient == 0) {
            p.terms_.pop_back();
        }
        return p;
    }

    const Symbols &variables() const noexcept
    {
        return vars_;
    }

    std::size_t arity() const noexcept
    {
        return vars_.size();
    }

    const std::vector<Term> &terms() const noexcept
    {
        return terms_;
    }

    std::size_t size() const noexcept
    {
        return terms_.size();
    }

    bool is_zero() const noexcept
    {
        return terms_.empty();
    }

    bool is_constant() const noexcept
    {
        return terms_.empty() || (terms_.size() == 1 && detail::degree(terms_[0].exponents) == 0);
    }

    bool is_one() const
    {
        return is_constant() && !is_zero() && terms_[0].coefficient == 1;
    }

    const Term &leading_term() const
    {
        if (terms_.empty()) {
            throw std::domain_error("leading term of the zero polynomial");
        }
        return terms_.front();
    }

    const Rational &leading_coefficient() const
    {
        return leading_term().coefficient;
    }

    Rational constant_term() const
    {
        if (!terms_.empty() && detail::degree(terms_.back().exponents) == 0) {
            return terms_.back().coefficient;
        }
        return 0;
    }

    std::uint64_t total_degree() const
    {
        return terms_.empty() ? 0 : detail::degree(terms_.front().exponents);
    }

    // Lowest total degree of a term: the order at the origin.
    std::uint64_t min_total_degree() const
    {
        if (terms_.empty()) {
            throw std::domain_error("order of the zero polynomial");
        }
        return detail::degree(terms_.back().exponents);
    }

    std::uint32_t degree_in(std::size_t var) const
    {
        std::uint32_t d = 0;
        for (const auto &t : terms_) {
            d = std::max(d, t.exponents[var]);
        }
        return d;
    }

    // Componentwise minimum of the exponent vectors.
    Exponents monomial_content() const
    {
        if (terms_.empty()) {
            return Exponents(vars_.size(), 0);
        }
        Exponents m = terms_.front().exponents;
        for (const auto &t : terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                m[i] = std::min(m[i], t.exponents[i]);
            }
        }
        return m;
    }

    Polynomial divide_monomial(const Exponents &m) const
    {
        Polynomial r(vars_);
        r.terms_.reserve(terms_.size());
        for (const auto &t : terms_) {
            Exponents e = t.exponents;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] < m[i]) {
                    throw std::domain_error("monomial does not divide polynomial");
                }
                e[i] -= m[i];
            }
            r.terms_.push_back({std::move(e), t.coefficient});
        }
        return r;
    }

    Polynomial multiply_monomial(const Exponents &m, const Rational &c = 1) const
    {
        Polynomial r(vars_);
        if (c == 0) {
            return r;
        }
        r.terms_.reserve(terms_.size());
        for (const auto &t : terms_) {
            r.terms_.push_back({detail::add(t.exponents, m), t.coefficient * c});
        }
        return r;
    }

    Polynomial operator-() const
    {
        Polynomial r = *this;
        for (auto &t : r.terms_) {
            t.coefficient = -t.coefficient;
        }
        return r;
    }

    Polynomial &operator*=(const Rational &c)
    {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto &t : terms_) {
                t.coefficient *= c;
            }
        }
        return *this;
    }

    friend Polynomial operator*(Polynomial p, const Rational &c)
    {
        p *= c;
        return p;
    }

    friend Polynomial operator*(const Rational &c, Polynomial p)
    {
        p *= c;
        return p;
    }

    friend Polynomial operator+(const Polynomial &a, const Polynomial &b)
    {
        return merge(a, b, false);
    }

    friend Polynomial operator-(const Polynomial &a, const Polynomial &b)
    {
        return merge(a, b, true);
    }

    Polynomial &operator+=(const Polynomial &b)
    {
        *this = merge(*this, b, false);
        return *this;
    }

    Polynomial &operator-=(const Polynomial &b)
    {
        *this = merge(*this, b, true);
        return *this;
    }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        check_same_ring(a, b);
        if (a.is_zero() || b.is_zero()) {
            return Polynomial(a.vars_);
        }
        if (b.terms_.size() == 1) {
            return a.multiply_monomial(b.terms_[0].exponents, b.terms_[0].coefficient);
        }
        if (a.terms_.size() == 1) {
            return b.multiply_monomial(a.terms_[0].exponents, a.terms_[0].coefficient);
        }
        std::unordered_map<Exponents, Rational, detail::ExponentsHash> acc;
        acc.reserve(a.terms_.size() * b.terms_.size());
        Rational prod;
        for (const auto &ta : a.terms_) {
            for (const auto &tb : b.terms_) {
                mpq_mul(prod.get_mpq_t(), ta.coefficient.get_mpq_t(), tb.coefficient.get_mpq_t());
                auto [it, inserted] = acc.try_emplace(detail::add(ta.exponents, tb.exponents));
                if (inserted) {
                    it->second = prod;
                } else {
                    mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), prod.get_mpq_t());
                }
            }
        }
        Polynomial r(a.vars_);
        r.terms_.reserve(acc.size());
        for (auto &[e, c] : acc) {
            if (c != 0) {
                r.terms_.push_back({e, std::move(c)});
            }
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term &x, const Term &y) { return detail::grlex_greater(x.exponents, y.exponents); });
        return r;
    }

    Polynomial &operator*=(const Polynomial &b)
    {
        *this = *this * b;
        return *this;
    }

    Polynomial pow(std::uint64_t n) const
    {
        Polynomial result = constant(vars_, 1);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1u) {
                result = result * base;
            }
            n >>= 1u;
            if (n > 0) {
                base = base * base;
            }
        }
        return result;
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b)
    {
        if (!(a.vars_ == b.vars_) || a.terms_.size() != b.terms_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].coefficient != b.terms_[i].coefficient) {
                return false;
            }
        }
        return true;
    }

    // Quotient when `d` divides this polynomial exactly, otherwise nullopt.
    // With a single divisor the leading-term reduction leaves a zero
    // remainder exactly when d divides.
    std::optional<Polynomial> divide_exact(const Polynomial &d) const
    {
        check_same_ring(*this, d);
        if (d.is_zero()) {
            throw std::domain_error("division by the zero polynomial");
        }
        Polynomial q(vars_);
        if (is_zero()) {
            return q;
        }
        if (d.terms_.size() == 1) {
            const auto &m = d.terms_[0].exponents;
            for (const auto &t : terms_) {
                if (!detail::divides(m, t.exponents)) {
                    return std::nullopt;
                }
            }
            Polynomial r = divide_monomial(m);
            r *= Rational(1) / d.terms_[0].coefficient;
            return r;
        }
        if (d.total_degree() > total_degree()) {
            return std::nullopt;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (d.degree_in(i) > degree_in(i)) {
                return std::nullopt;
            }
        }
        const auto &lead = d.leading_term();
        Polynomial rem = *this;
        while (!rem.is_zero()) {
            const auto &lt = rem.leading_term();
            if (!detail::divides(lead.exponents, lt.exponents)) {
                return std::nullopt;
            }
            Exponents e = lt.exponents;
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] -= lead.exponents[i];
            }
            Rational c = lt.coefficient / lead.coefficient;
            rem -= d.multiply_monomial(e, c);
            q.terms_.push_back({std::move(e), std::move(c)});
        }
        return q;
    }

    // Ring homomorphism sending variable i to images[i]; all images must
    // live in `target`. Evaluated by nested Horner schemes.
    Polynomial substitute(std::span<const Polynomial> images, const Symbols &target) const
    {
        if (images.size() != vars_.size()) {
            throw std::invalid_argument("substitution needs one image per variable");
        }
        for (const auto &img : images) {
            if (!(img.vars_ == target)) {
                throw std::invalid_argument("substitution image lives in a different ring");
            }
        }
        if (is_zero()) {
            return Polynomial(target);
        }
        std::vector<std::map<std::uint32_t, Polynomial>> powers(vars_.size());
        std::vector<const Term *> ptrs;
        ptrs.reserve(terms_.size());
        for (const auto &t : terms_) {
            ptrs.push_back(&t);
        }
        return horner(ptrs, 0, images, target, powers);
    }

    // Same exponents, renamed variables (the arity must agree).
    Polynomial rebind(const Symbols &vars) const
    {
        if (vars.size() != vars_.size()) {
            throw std::invalid_argument("rebind to a ring of different arity");
        }
        Polynomial r = *this;
        r.vars_ = vars;
        return r;
    }

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        bool first = true;
        for (const auto &t : terms_) {
            const bool neg = t.coefficient < 0;
            const Rational mag = neg ? Rational(-t.coefficient) : t.coefficient;
            if (first) {
                out += neg ? "-" : "";
            } else {
                out += neg ? " - " : " + ";
            }
            first = false;
            const std::string mono = monomial_string(t.exponents);
            if (mono.empty()) {
                out += lqt::to_string(mag);
            } else if (mag == 1) {
                out += mono;
            } else {
                out += lqt::to_string(mag) + "*" + mono;
            }
        }
        return out;
    }

    std::string monomial_string(const Exponents &e) const
    {
        std::string s;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (!s.empty()) {
                s += "*";
            }
            s += vars_[i];
            if (e[i] > 1) {
                s += "^" + std::to_string(e[i]);
            }
        }
        return s;
    }

private:
    static void check_same_ring(const Polynomial &a, const Polynomial &b)
    {
        if (!(a.vars_ == b.vars_)) {
            throw std::invalid_argument("polynomials live in different rings");
        }
    }

    static Polynomial merge(const Polynomial &a, const Polynomial &b, bool subtract)
    {
        check_same_ring(a, b);
        Polynomial r(a.vars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size()
                || (i < a.terms_.size() && detail::grlex_greater(a.terms_[i].exponents, b.terms_[j].exponents))) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || detail::grlex_greater(b.terms_[j].exponents, a.terms_[i].exponents)) {
                r.terms_.push_back({b.terms_[j].exponents,
                                    subtract ? Rational(-b.terms_[j].coefficient) : b.terms_[j].coefficient});
                ++j;
            } else {
                Rational c = subtract ? Rational(a.terms_[i].coefficient - b.terms_[j].coefficient)
                                      : Rational(a.terms_[i].coefficient + b.terms_[j].coefficient);
                if (c != 0) {
                    r.terms_.push_back({a.terms_[i].exponents, std::move(c)});
                }
                ++i;
                ++j;
            }
        }
        return r;
    }

    static const Polynomial &power_of(std::size_t var, std::uint32_t k, std::span<const Polynomial> images,
                                      std::vector<std::map<std::uint32_t, Polynomial>> &powers)
    {
        auto &cache = powers[var];
        if (auto it = cache.find(k); it != cache.end()) {
            return it->second;
        }
        Polynomial p = k == 1 ? images[var] : images[var].pow(k);
        return cache.emplace(k, std::move(p)).first->second;
    }

    static Polynomial horner(std::vector<const Term *> &terms, std::size_t var, std::span<const Polynomial> images,
                             const Symbols &target, std::vector<std::map<std::uint32_t, Polynomial>> &powers)
    {
        if (var == images.size()) {
            Rational c = 0;
            for (const auto *t : terms) {
                c += t->coefficient;
            }
            return constant(target, c);
        }
        std::stable_sort(terms.begin(), terms.end(),
                         [var](const Term *a, const Term *b) { return a->exponents[var] > b->exponents[var]; });
        Polynomial acc(target);
        std::uint32_t prev = terms.front()->exponents[var];
        std::size_t i = 0;
        while (i < terms.size()) {
            const std::uint32_t k = terms[i]->exponents[var];
            std::size_t j = i;
            while (j < terms.size() && terms[j]->exponents[var] == k) {
                ++j;
            }
            std::vector<const Term *> group(terms.begin() + static_cast<std::ptrdiff_t>(i),
                                            terms.begin() + static_cast<std::ptrdiff_t>(j));
            if (prev != k && !acc.is_zero()) {
                acc = acc * power_of(var, prev - k, images, powers);
            }
            acc += horner(group, var + 1, images, target, powers);
            prev = k;
            i = j;
        }
        if (prev > 0 && !acc.is_zero()) {
            acc = acc * power_of(var, prev, images, powers);
        }
        return acc;
    }

    Symbols vars_;
    std::vector<Term> terms_;
};

} // namespace lqt
