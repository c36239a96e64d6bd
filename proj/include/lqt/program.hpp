#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lqt/chart.hpp"
#include "lqt/series.hpp"

namespace lqt
{

// A finite positive rational, or +infinity for coordinates that lie in
// the prime the program runs along (lifted programs only).
class Value
{
public:
    Value(Rational q = 0) : q_(std::move(q)) {}

    static Value infinity()
    {
        Value v;
        v.inf_ = true;
        return v;
    }

    bool is_infinite() const noexcept
    {
        return inf_;
    }

    const Rational &finite() const
    {
        if (inf_) {
            throw std::logic_error("infinite value has no rational part");
        }
        return q_;
    }

    std::string to_string() const
    {
        return inf_ ? "inf" : lqt::to_string(q_);
    }

    friend bool operator==(const Value &a, const Value &b)
    {
        return a.inf_ == b.inf_ && (a.inf_ || a.q_ == b.q_);
    }

    friend bool operator<(const Value &a, const Value &b)
    {
        if (a.inf_) {
            return false;
        }
        return b.inf_ || a.q_ < b.q_;
    }

private:
    Rational q_;
    bool inf_ = false;
};

class ConsistencyError : public std::runtime_error
{
public:
    ConsistencyError(std::size_t stage, std::string coordinate, const std::string &what)
        : std::runtime_error("stage " + std::to_string(stage) + ", coordinate " + coordinate + ": " + what),
          stage_(stage), coordinate_(std::move(coordinate))
    {
    }

    std::size_t stage() const noexcept
    {
        return stage_;
    }

    const std::string &coordinate() const noexcept
    {
        return coordinate_;
    }

private:
    std::size_t stage_;
    std::string coordinate_;
};

struct PeriodicSchedule {
    std::vector<Directive> preperiod;
    std::vector<Directive> period;
};

// Follows the branch subst = tau(base): always pivot `base`, translate
// `subst` by c_{n+1} whenever that coefficient is nonzero.
struct CurveSchedule {
    std::size_t base = 0;
    std::size_t subst = 1;
    CoefficientStream stream = CoefficientStream::exp();
};

class ValuationProgram
{
public:
    ValuationProgram(Symbols vars, std::vector<Value> initial, PeriodicSchedule schedule)
        : vars_(std::move(vars)), initial_(std::move(initial)), schedule_(std::move(schedule))
    {
        check_common();
        const auto &s = std::get<PeriodicSchedule>(schedule_);
        if (s.period.empty()) {
            throw std::invalid_argument("period must contain at least one directive");
        }
        auto check = [&](const Directive &d) {
            check_directive(d, vars_.size());
            if (initial_[d.pivot].is_infinite()) {
                throw std::invalid_argument("coordinate " + vars_[d.pivot] + " has infinite value and cannot be a pivot");
            }
            for (const auto &t : d.translations) {
                if (initial_[t.coord].is_infinite()) {
                    throw std::invalid_argument("coordinate " + vars_[t.coord]
                                                + " has infinite value and cannot be translated");
                }
                if (t.value.amount <= 0) {
                    throw std::invalid_argument("assigned values must be positive");
                }
            }
        };
        for (const auto &d : s.preperiod) {
            check(d);
        }
        for (const auto &d : s.period) {
            check(d);
        }
    }

    // The value of `subst` is determined by the series and overwrites
    // whatever the caller supplied.
    ValuationProgram(Symbols vars, std::vector<Value> initial, CurveSchedule schedule)
        : vars_(std::move(vars)), initial_(std::move(initial)), schedule_(std::move(schedule))
    {
        check_common();
        const auto &c = std::get<CurveSchedule>(schedule_);
        if (c.base >= vars_.size() || c.subst >= vars_.size() || c.base == c.subst) {
            throw std::invalid_argument("curve needs two distinct coordinates");
        }
        if (initial_[c.base].is_infinite()) {
            throw std::invalid_argument("curve base must have a finite value");
        }
        const auto k = c.stream.next_nonzero(1);
        if (!k) {
            throw ConsistencyError(0, vars_[c.subst], "series is identically zero");
        }
        initial_[c.subst] = Value(Rational(static_cast<unsigned long>(*k)) * initial_[c.base].finite());
    }

    std::size_t dimension() const noexcept
    {
        return vars_.size();
    }

    const Symbols &variables() const noexcept
    {
        return vars_;
    }

    const std::vector<Value> &initial_values() const noexcept
    {
        return initial_;
    }

    const PeriodicSchedule *periodic() const noexcept
    {
        return std::get_if<PeriodicSchedule>(&schedule_);
    }

    const CurveSchedule *curve() const noexcept
    {
        return std::get_if<CurveSchedule>(&schedule_);
    }

    // Coordinates with infinite value: never pivoted, never translated.
    std::vector<std::size_t> infinite_coordinates() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < initial_.size(); ++i) {
            if (initial_[i].is_infinite()) {
                out.push_back(i);
            }
        }
        return out;
    }

    // The directive taking stage n to stage n + 1.
    Directive directive(std::size_t n) const
    {
        if (const auto *s = periodic()) {
            if (n < s->preperiod.size()) {
                return s->preperiod[n];
            }
            return s->period[(n - s->preperiod.size()) % s->period.size()];
        }
        const auto &c = std::get<CurveSchedule>(schedule_);
        Directive d;
        d.pivot = c.base;
        const Rational cn = c.stream.coefficient(n + 1);
        if (cn != 0) {
            const auto next = c.stream.next_nonzero(n + 2);
            if (!next) {
                throw ConsistencyError(n + 1, vars_[c.subst] + "_" + std::to_string(n + 1),
                                       "series terminates, the translated coordinate would vanish");
            }
            const Rational gap(static_cast<unsigned long>(*next - (n + 1)));
            d.translations.push_back({c.subst, cn, ValueRule{gap * initial_[c.base].finite(), false}});
        }
        return d;
    }

    ChartSession session() const
    {
        ValuationProgram copy = *this;
        return ChartSession(vars_, [copy](std::size_t n) { return copy.directive(n); });
    }

private:
    void check_common() const
    {
        if (initial_.size() != vars_.size()) {
            throw std::invalid_argument("need one initial value per variable");
        }
        if (vars_.size() == 0) {
            throw std::invalid_argument("program needs at least one variable");
        }
        for (std::size_t i = 0; i < initial_.size(); ++i) {
            if (!initial_[i].is_infinite() && initial_[i].finite() <= 0) {
                throw std::invalid_argument("initial value of " + vars_[i] + " must be positive");
            }
        }
    }

    Symbols vars_;
    std::vector<Value> initial_;
    std::variant<PeriodicSchedule, CurveSchedule> schedule_;
};

// Removes the listed coordinates. Their translations vanish with them;
// pivoting a removed coordinate is an error.
inline ValuationProgram drop_coordinates(const ValuationProgram &p, const std::vector<std::size_t> &drop)
{
    std::vector<std::size_t> index(p.dimension(), p.dimension());
    std::vector<std::string> names;
    std::vector<Value> initial;
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) {
            index[i] = names.size();
            names.push_back(p.variables()[i]);
            initial.push_back(p.initial_values()[i]);
        }
    }
    if (names.empty()) {
        throw std::invalid_argument("cannot drop every coordinate");
    }
    Symbols vars(std::move(names));
    auto remap = [&](const Directive &d) {
        if (index[d.pivot] == p.dimension()) {
            throw std::invalid_argument("program pivots the removed coordinate " + p.variables()[d.pivot]);
        }
        Directive r;
        r.pivot = index[d.pivot];
        for (const auto &t : d.translations) {
            if (index[t.coord] != p.dimension()) {
                r.translations.push_back({index[t.coord], t.constant, t.value});
            }
        }
        return r;
    };
    if (const auto *s = p.periodic()) {
        PeriodicSchedule q;
        for (const auto &d : s->preperiod) {
            q.preperiod.push_back(remap(d));
        }
        for (const auto &d : s->period) {
            q.period.push_back(remap(d));
        }
        return ValuationProgram(vars, std::move(initial), std::move(q));
    }
    const auto *c = p.curve();
    if (index[c->base] == p.dimension() || index[c->subst] == p.dimension()) {
        throw std::invalid_argument("cannot remove a coordinate of the curve");
    }
    return ValuationProgram(vars, std::move(initial), CurveSchedule{index[c->base], index[c->subst], c->stream});
}

struct ValueVector {
    std::size_t stage = 0;
    std::vector<Value> values;
};

// Values after applying d to the stage-`stage` vector V. Checks that the
// pivot is minimal and that exactly the zero-valued ratios are translated.
inline std::vector<Value> apply_values(const std::vector<Value> &V, const Directive &d, std::size_t stage,
                                       const Symbols &vars)
{
    check_directive(d, V.size());
    const Symbols here = stage_symbols(vars, stage);
    const Symbols next = stage_symbols(vars, stage + 1);
    const Value &pv = V[d.pivot];
    if (pv.is_infinite()) {
        throw ConsistencyError(stage, here[d.pivot], "pivot has infinite value");
    }
    for (std::size_t j = 0; j < V.size(); ++j) {
        if (V[j] < pv) {
            throw ConsistencyError(stage, here[d.pivot], "pivot value is not minimal (" + here[j] + " is smaller)");
        }
    }
    const Rational &p = pv.finite();
    std::vector<Value> out(V.size());
    out[d.pivot] = pv;
    for (std::size_t j = 0; j < V.size(); ++j) {
        if (j == d.pivot) {
            continue;
        }
        const Translation *t = d.translation_of(j);
        if (V[j].is_infinite()) {
            if (t) {
                throw ConsistencyError(stage + 1, next[j], "cannot translate a coordinate of infinite value");
            }
            out[j] = V[j];
            continue;
        }
        const Rational w = V[j].finite() - p;
        if (t) {
            if (w != 0) {
                throw ConsistencyError(stage + 1, next[j],
                                       "translated, but the ratio has value " + to_string(w) + " instead of 0");
            }
            const Rational assigned = t->value.relative_to_pivot ? Rational(t->value.amount * p) : t->value.amount;
            if (assigned <= 0) {
                throw ConsistencyError(stage + 1, next[j], "assigned value must be positive");
            }
            out[j] = Value(assigned);
        } else {
            if (w == 0) {
                throw ConsistencyError(stage + 1, next[j], "ratio has value 0 but no translation is given");
            }
            out[j] = Value(w);
        }
    }
    return out;
}

// Incrementally folded value vectors of one program.
class ValueTrace
{
public:
    explicit ValueTrace(const ValuationProgram &p) : program_(p)
    {
        vectors_.push_back(p.initial_values());
    }

    const std::vector<Value> &at(std::size_t stage)
    {
        while (vectors_.size() <= stage) {
            const std::size_t k = vectors_.size() - 1;
            vectors_.push_back(apply_values(vectors_.back(), program_.directive(k), k, program_.variables()));
        }
        return vectors_[stage];
    }

    // nu(m_n): the least coordinate value at stage n.
    Rational multiplicity(std::size_t stage)
    {
        const auto &v = at(stage);
        return std::min_element(v.begin(), v.end())->finite();
    }

private:
    ValuationProgram program_;
    std::deque<std::vector<Value>> vectors_;
};

inline ValueVector value_vector_at(const ValuationProgram &p, std::size_t n)
{
    ValueTrace t(p);
    return {n, t.at(n)};
}

inline std::vector<Rational> multiplicity_sequence(const ValuationProgram &p, std::size_t count)
{
    if (count == 0) {
        throw std::invalid_argument("multiplicity sequence needs at least one entry");
    }
    ValueTrace t(p);
    std::vector<Rational> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(t.multiplicity(n));
    }
    return out;
}

struct MultiplicityClass {
    enum class Kind { Divergent, Convergent, Undecided };
    Kind kind = Kind::Undecided;
    std::optional<Rational> limit;
    std::optional<Rational> ratio;
};

inline std::string to_string(MultiplicityClass::Kind k)
{
    switch (k) {
    case MultiplicityClass::Kind::Divergent:
        return "Divergent";
    case MultiplicityClass::Kind::Convergent:
        return "Convergent";
    case MultiplicityClass::Kind::Undecided:
        return "Undecided";
    }
    return "";
}

namespace detail
{

// Runs the trace until a finite coordinate outside the active set breaks
// consistency. Used when such a coordinate is certain to fail.
[[noreturn]] inline void run_until_inconsistent(ValueTrace &trace, std::size_t limit)
{
    for (std::size_t n = 0; n <= limit; ++n) {
        trace.at(n);
    }
    throw std::logic_error("internal error: expected a consistency violation");
}

} // namespace detail

// Exact when the period acts on the active coordinates (those pivoted or
// translated in the period) by scaling with a constant ratio. Two
// consecutive periods with the same ratio certify this, because the
// period map is affine.
inline MultiplicityClass classify_multiplicity(const ValuationProgram &p)
{
    ValueTrace trace(p);
    std::set<std::size_t> active;
    std::size_t start = 0, len = 1;
    if (const auto *s = p.periodic()) {
        start = s->preperiod.size();
        len = s->period.size();
        for (const auto &d : s->period) {
            active.insert(d.pivot);
            for (const auto &t : d.translations) {
                active.insert(t.coord);
            }
        }
    } else {
        const auto *c = p.curve();
        active = {c->base, c->subst};
    }
    std::vector<std::size_t> passive;
    for (std::size_t j = 0; j < p.dimension(); ++j) {
        if (!active.count(j) && !p.initial_values()[j].is_infinite()) {
            passive.push_back(j);
        }
    }

    MultiplicityClass out;
    Rational pre_sum = 0;
    for (std::size_t n = 0; n < start; ++n) {
        pre_sum += trace.multiplicity(n);
    }

    Rational c0 = 0, max_pivot = 0;
    for (std::size_t n = start; n < start + len; ++n) {
        const Rational m = trace.multiplicity(n);
        c0 += m;
        max_pivot = std::max(max_pivot, m);
    }

    if (p.curve()) {
        // The base stays the pivot and keeps its value: constant multiplicity.
        if (!passive.empty()) {
            const Rational &v = p.initial_values()[passive.front()].finite();
            detail::run_until_inconsistent(trace, static_cast<std::size_t>(mpz_class(v / c0 + 2).get_ui()) + 2);
        }
        out.kind = MultiplicityClass::Kind::Divergent;
        out.ratio = Rational(1);
        return out;
    }

    const auto v0 = trace.at(start);
    const auto v1 = trace.at(start + len);
    const auto v2 = trace.at(start + 2 * len);
    const std::size_t ref = *active.begin();
    const Rational rho = v1[ref].finite() / v0[ref].finite();
    for (auto j : active) {
        if (v1[j].finite() != rho * v0[j].finite() || v2[j].finite() != rho * v1[j].finite()) {
            return out;
        }
    }
    out.ratio = rho;

    if (rho >= 1) {
        if (!passive.empty()) {
            // A finite passive value loses at least c0 per period.
            Rational worst = p.initial_values()[passive.front()].finite();
            for (auto j : passive) {
                worst = std::max(worst, p.initial_values()[j].finite());
            }
            const auto periods = mpz_class(worst / c0).get_ui() + 3;
            detail::run_until_inconsistent(trace, start + periods * len);
        }
        out.kind = MultiplicityClass::Kind::Divergent;
        return out;
    }

    const Rational tail = c0 / (1 - rho);
    std::optional<Rational> floor;
    for (auto j : passive) {
        const Rational lim = v0[j].finite() - tail;
        if (lim < 0) {
            // Passive value drops below zero, so consistency must fail.
            std::size_t n = start;
            for (std::size_t guard = 0; guard < 100000; ++guard, ++n) {
                trace.at(n);
            }
            return out;
        }
        if (lim > 0) {
            floor = floor ? std::min(*floor, lim) : lim;
        }
    }
    if (floor) {
        // Passive values stay above `floor` while pivot values shrink
        // geometrically; check stages until the pivots fall below it.
        Rational bound = max_pivot;
        std::size_t k = 0;
        while (bound >= *floor) {
            bound *= rho;
            ++k;
        }
        trace.at(start + (k + 1) * len);
    }
    out.kind = MultiplicityClass::Kind::Convergent;
    out.limit = pre_sum + tail;
    return out;
}

struct ValueResolution {
    std::size_t stage = 0;
    // Absent when the element's monomial involves a coordinate of infinite value.
    std::optional<Rational> value;
};

// Follows the strict transform until the element is a monomial times a
// unit; its value is then the monomial's exponent vector dotted with the
// stage's value vector.
inline std::optional<ValueResolution> resolve_value(const RationalFunction &f, const ValuationProgram &p,
                                                    std::size_t budget)
{
    if (f.is_zero()) {
        throw std::domain_error("value of zero");
    }
    ChartSession session = p.session();
    ValueTrace trace(p);
    StrictTransform st(f);
    const auto infinite = p.infinite_coordinates();
    for (std::size_t n = 0;; ++n) {
        for (auto j : infinite) {
            if (st.exponents()[j] != 0) {
                return ValueResolution{n, std::nullopt};
            }
        }
        if (st.resolved()) {
            const auto &vals = trace.at(n);
            Rational v = 0;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                if (st.exponents()[i] != 0) {
                    v += Rational(st.exponents()[i]) * vals[i].finite();
                }
            }
            return ValueResolution{n, v};
        }
        if (n == budget) {
            return std::nullopt;
        }
        trace.at(n + 1);
        st.step(session.directive(n), session.images(n), session.coords(n + 1));
    }
}

inline std::optional<Rational> value_of(const RationalFunction &f, const ValuationProgram &p, std::size_t budget)
{
    auto r = resolve_value(f, p, budget);
    if (!r) {
        return std::nullopt;
    }
    return r->value;
}

} // namespace lqt
