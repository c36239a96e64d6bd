#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lqt/rational_function.hpp"

namespace lqt
{

// Value given to a translated coordinate: either a fixed rational or a
// multiple of the pivot's value at that stage.
struct ValueRule {
    Rational amount;
    bool relative_to_pivot = false;

    friend bool operator==(const ValueRule &, const ValueRule &) = default;
};

struct Translation {
    std::size_t coord;
    Rational constant;
    ValueRule value;

    friend bool operator==(const Translation &, const Translation &) = default;
};

// One LQT step: divide by the pivot coordinate, then shift the listed
// coordinates by their constants so the new center is the origin.
struct Directive {
    std::size_t pivot = 0;
    std::vector<Translation> translations;

    const Translation *translation_of(std::size_t coord) const
    {
        for (const auto &t : translations) {
            if (t.coord == coord) {
                return &t;
            }
        }
        return nullptr;
    }

    friend bool operator==(const Directive &, const Directive &) = default;
};

// Coordinate names at a stage: the original names at stage 0, `<name>_<n>` after.
inline Symbols stage_symbols(const Symbols &original, std::size_t stage)
{
    if (stage == 0) {
        return original;
    }
    std::vector<std::string> names;
    names.reserve(original.size());
    for (const auto &n : original.names()) {
        names.push_back(n + "_" + std::to_string(stage));
    }
    return Symbols(std::move(names));
}

inline void check_directive(const Directive &d, std::size_t dim)
{
    if (d.pivot >= dim) {
        throw std::out_of_range("pivot index out of range");
    }
    for (const auto &t : d.translations) {
        if (t.coord >= dim) {
            throw std::out_of_range("translated coordinate out of range");
        }
        if (t.coord == d.pivot) {
            throw std::invalid_argument("the pivot cannot be translated");
        }
        if (t.constant == 0) {
            throw std::invalid_argument("translation constant must be nonzero");
        }
    }
}

// Old coordinates written in the new ones: u_p = U_p, u_j = U_p (U_j + c_j).
inline std::vector<Polynomial> step_images(const Directive &d, const Symbols &next)
{
    check_directive(d, next.size());
    std::vector<Polynomial> images;
    images.reserve(next.size());
    const Polynomial pivot = Polynomial::variable(next, d.pivot);
    for (std::size_t j = 0; j < next.size(); ++j) {
        if (j == d.pivot) {
            images.push_back(pivot);
            continue;
        }
        Polynomial u = Polynomial::variable(next, j);
        if (const auto *t = d.translation_of(j)) {
            u += Polynomial::constant(next, t->constant);
        }
        images.push_back(pivot * u);
    }
    return images;
}

class Chart
{
public:
    explicit Chart(Symbols original) : original_(original), coords_(original)
    {
        for (std::size_t i = 0; i < original_.size(); ++i) {
            inverse_.push_back(Polynomial::variable(coords_, i));
        }
    }

    Chart(std::size_t stage, Symbols original, Symbols coords, std::vector<Polynomial> inverse)
        : stage_(stage), original_(std::move(original)), coords_(std::move(coords)), inverse_(std::move(inverse))
    {
    }

    std::size_t stage() const noexcept
    {
        return stage_;
    }

    std::size_t dimension() const noexcept
    {
        return coords_.size();
    }

    const Symbols &original() const noexcept
    {
        return original_;
    }

    const Symbols &coords() const noexcept
    {
        return coords_;
    }

    // Entry i expresses original variable i in the current coordinates.
    const std::vector<Polynomial> &inverse_subst() const noexcept
    {
        return inverse_;
    }

private:
    std::size_t stage_ = 0;
    Symbols original_;
    Symbols coords_;
    std::vector<Polynomial> inverse_;
};

inline Chart apply_directive(const Chart &chart, const Directive &d)
{
    const Symbols next = stage_symbols(chart.original(), chart.stage() + 1);
    const auto images = step_images(d, next);
    std::vector<Polynomial> inverse;
    inverse.reserve(chart.dimension());
    for (const auto &p : chart.inverse_subst()) {
        inverse.push_back(p.substitute(images, next));
    }
    return Chart(chart.stage() + 1, chart.original(), next, std::move(inverse));
}

// Substitutes the chart's inverse and reduces with a full gcd.
inline RationalFunction express_in_chart(const RationalFunction &f, const Chart &chart)
{
    if (!(f.variables() == chart.original())) {
        throw std::invalid_argument("element is not written in the chart's original variables");
    }
    return f.substitute(chart.inverse_subst(), chart.coords());
}

inline std::int64_t ord_n(const RationalFunction &f, const Chart &chart)
{
    return ord_at_origin(express_in_chart(f, chart));
}

// True when the denominator is a unit of the local ring at the origin.
inline bool in_ring_local(const RationalFunction &g)
{
    return g.denominator().constant_term() != 0;
}

inline bool in_ring(const RationalFunction &f, const Chart &chart)
{
    if (f.is_zero()) {
        return true;
    }
    return in_ring_local(express_in_chart(f, chart));
}

// g = monomial * (u / v) with u(0), v(0) nonzero: returns the monomial's
// exponent vector (negative entries allowed).
inline std::optional<std::vector<std::int64_t>> monomial_unit_split_local(const RationalFunction &g)
{
    if (g.is_zero()) {
        return std::nullopt;
    }
    const Exponents mn = g.numerator().monomial_content();
    const Exponents md = g.denominator().monomial_content();
    if (g.numerator().divide_monomial(mn).constant_term() == 0
        || g.denominator().divide_monomial(md).constant_term() == 0) {
        return std::nullopt;
    }
    std::vector<std::int64_t> e(mn.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = static_cast<std::int64_t>(mn[i]) - static_cast<std::int64_t>(md[i]);
    }
    return e;
}

inline std::optional<std::vector<std::int64_t>> monomial_unit_split(const RationalFunction &f, const Chart &chart)
{
    return monomial_unit_split_local(express_in_chart(f, chart));
}

using DirectiveSource = std::function<Directive(std::size_t)>;

// Walks the charts of one LQT sequence and memoizes, per element, its
// expression at every stage reached so far. Each step needs no gcd: the
// images of coprime N, D can only share powers of the new pivot.
class ChartSession
{
public:
    ChartSession(Symbols original, DirectiveSource source) : original_(std::move(original)), source_(std::move(source))
    {
        symbols_.push_back(original_);
    }

    const Symbols &original() const noexcept
    {
        return original_;
    }

    const Symbols &coords(std::size_t stage)
    {
        ensure_stage(stage);
        return symbols_[stage];
    }

    const Directive &directive(std::size_t stage)
    {
        ensure_stage(stage + 1);
        return directives_[stage];
    }

    // Old coordinates of stage k written in the coordinates of stage k + 1.
    const std::vector<Polynomial> &images(std::size_t k)
    {
        ensure_stage(k + 1);
        return images_[k];
    }

    RationalFunction express(const RationalFunction &f, std::size_t stage)
    {
        if (!(f.variables() == original_)) {
            throw std::invalid_argument("element is not written in the session's original variables");
        }
        ensure_stage(stage);
        auto &trail = memo_[f.numerator().to_string() + "\n" + f.denominator().to_string()];
        if (trail.empty()) {
            trail.push_back(f);
        }
        while (trail.size() <= stage) {
            const std::size_t k = trail.size() - 1;
            trail.push_back(advance(trail.back(), k));
        }
        return trail[stage];
    }

    std::int64_t ord(const RationalFunction &f, std::size_t stage)
    {
        return ord_at_origin(express(f, stage));
    }

    bool in_ring(const RationalFunction &f, std::size_t stage)
    {
        return f.is_zero() || in_ring_local(express(f, stage));
    }

    Chart chart(std::size_t stage)
    {
        Chart c(original_);
        for (std::size_t k = 0; k < stage; ++k) {
            c = apply_directive(c, directive(k));
        }
        return c;
    }

private:
    void ensure_stage(std::size_t stage)
    {
        while (symbols_.size() <= stage) {
            const std::size_t k = symbols_.size() - 1;
            Directive d = source_(k);
            check_directive(d, original_.size());
            symbols_.push_back(stage_symbols(original_, k + 1));
            images_.push_back(step_images(d, symbols_.back()));
            directives_.push_back(std::move(d));
        }
    }

    RationalFunction advance(const RationalFunction &g, std::size_t k)
    {
        if (g.is_zero()) {
            return RationalFunction(symbols_[k + 1]);
        }
        Polynomial n = g.numerator().substitute(images_[k], symbols_[k + 1]);
        Polynomial d = g.denominator().substitute(images_[k], symbols_[k + 1]);
        const std::size_t p = directives_[k].pivot;
        const auto common = std::min(n.monomial_content()[p], d.monomial_content()[p]);
        if (common > 0) {
            Exponents m(n.arity(), 0);
            m[p] = common;
            n = n.divide_monomial(m);
            d = d.divide_monomial(m);
        }
        return RationalFunction::from_coprime(std::move(n), std::move(d));
    }

    Symbols original_;
    DirectiveSource source_;
    std::deque<Symbols> symbols_;
    std::deque<Directive> directives_;
    std::deque<std::vector<Polynomial>> images_;
    std::unordered_map<std::string, std::vector<RationalFunction>> memo_;
};

// Tracks f through the sequence as  U^e * N / D  where no coordinate
// divides N or D and factors that are units at the origin are dropped.
// Enough for membership, order and monomial resolution without carrying
// the full element, whose size grows with the stage.
class StrictTransform
{
public:
    explicit StrictTransform(const RationalFunction &f) : num_(f.numerator()), den_(f.denominator())
    {
        if (f.is_zero()) {
            throw std::domain_error("strict transform of zero");
        }
        exps_.assign(num_.arity(), Integer(0));
        absorb(num_, 1);
        absorb(den_, -1);
    }

    std::size_t stage() const noexcept
    {
        return stage_;
    }

    const std::vector<Integer> &exponents() const noexcept
    {
        return exps_;
    }

    const Polynomial &strict_numerator() const noexcept
    {
        return num_;
    }

    const Polynomial &strict_denominator() const noexcept
    {
        return den_;
    }

    bool in_ring() const
    {
        if (!den_.is_one()) {
            return false;
        }
        for (const auto &e : exps_) {
            if (e < 0) {
                return false;
            }
        }
        return true;
    }

    bool resolved() const
    {
        return num_.is_one() && den_.is_one();
    }

    Integer ord() const
    {
        Integer s = 0;
        for (const auto &e : exps_) {
            s += e;
        }
        s += static_cast<unsigned long>(num_.min_total_degree());
        s -= static_cast<unsigned long>(den_.min_total_degree());
        return s;
    }

    void step(const Directive &d, const std::vector<Polynomial> &images, const Symbols &next)
    {
        std::vector<Integer> e(exps_.size(), Integer(0));
        for (std::size_t j = 0; j < exps_.size(); ++j) {
            e[d.pivot] += exps_[j];
            if (j != d.pivot && d.translation_of(j) == nullptr) {
                e[j] += exps_[j];
            }
        }
        exps_ = std::move(e);
        num_ = num_.is_one() ? Polynomial::constant(next, 1) : num_.substitute(images, next);
        den_ = den_.is_one() ? Polynomial::constant(next, 1) : den_.substitute(images, next);
        absorb(num_, 1);
        absorb(den_, -1);
        ++stage_;
    }

    // Principal ideal transform bookkeeping: divide by a coordinate power.
    void divide_coordinate(std::size_t coord, const Integer &k)
    {
        exps_[coord] -= k;
    }

private:
    void absorb(Polynomial &p, int sign)
    {
        const Exponents m = p.monomial_content();
        bool any = false;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                any = true;
                if (sign > 0) {
                    exps_[i] += m[i];
                } else {
                    exps_[i] -= m[i];
                }
            }
        }
        if (any) {
            p = p.divide_monomial(m);
        }
        if (p.constant_term() != 0) {
            p = Polynomial::constant(p.variables(), 1);
        } else {
            p = detail::primitive_integer(p);
        }
    }

    std::size_t stage_ = 0;
    std::vector<Integer> exps_;
    Polynomial num_;
    Polynomial den_;
};

} // namespace lqt
