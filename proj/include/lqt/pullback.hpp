#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lqt/program.hpp"
#include "lqt/series.hpp"

namespace lqt
{

// Prime generated by a nonempty proper subset of the coordinates.
class CoordinatePrime
{
public:
    CoordinatePrime(Symbols ambient, std::vector<std::size_t> generators)
        : ambient_(std::move(ambient)), gens_(std::move(generators))
    {
        std::sort(gens_.begin(), gens_.end());
        gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
        if (gens_.empty()) {
            throw std::invalid_argument("prime needs at least one generator");
        }
        if (gens_.size() >= ambient_.size()) {
            throw std::invalid_argument("prime must not contain every variable (it would be maximal)");
        }
        if (gens_.back() >= ambient_.size()) {
            throw std::out_of_range("prime generator out of range");
        }
        std::vector<std::string> rest;
        for (std::size_t i = 0; i < ambient_.size(); ++i) {
            if (!contains(i)) {
                rest.push_back(ambient_[i]);
            }
        }
        residue_vars_ = Symbols(std::move(rest));
    }

    static CoordinatePrime by_names(const Symbols &ambient, const std::vector<std::string> &names)
    {
        std::vector<std::size_t> idx;
        for (const auto &n : names) {
            auto i = ambient.index_of(n);
            if (!i) {
                throw std::invalid_argument("prime generator '" + n + "' is not a variable");
            }
            idx.push_back(*i);
        }
        return CoordinatePrime(ambient, std::move(idx));
    }

    const Symbols &ambient() const noexcept
    {
        return ambient_;
    }

    const std::vector<std::size_t> &generators() const noexcept
    {
        return gens_;
    }

    // Variables of the residue field kappa(P), in ambient order.
    const Symbols &residue_variables() const noexcept
    {
        return residue_vars_;
    }

    bool contains(std::size_t var) const
    {
        return std::binary_search(gens_.begin(), gens_.end(), var);
    }

    std::vector<std::string> generator_names() const
    {
        std::vector<std::string> out;
        for (auto g : gens_) {
            out.push_back(ambient_[g]);
        }
        return out;
    }

private:
    Symbols ambient_;
    std::vector<std::size_t> gens_;
    Symbols residue_vars_;
};

// Every term involves a generator.
inline bool in_prime(const Polynomial &g, const CoordinatePrime &P)
{
    for (const auto &t : g.terms()) {
        bool hit = false;
        for (auto i : P.generators()) {
            hit = hit || t.exponents[i] > 0;
        }
        if (!hit) {
            return false;
        }
    }
    return true;
}

inline bool member_RP(const RationalFunction &f, const CoordinatePrime &P)
{
    return !in_prime(f.denominator(), P);
}

// Sets the generators to zero: R_P -> kappa(P).
inline RationalFunction residue(const RationalFunction &f, const CoordinatePrime &P)
{
    if (!(f.variables() == P.ambient())) {
        throw std::invalid_argument("element and prime live in different rings");
    }
    if (!member_RP(f, P)) {
        throw std::domain_error("residue of an element outside R_P");
    }
    const Symbols &rest = P.residue_variables();
    std::vector<Polynomial> images;
    std::size_t k = 0;
    for (std::size_t i = 0; i < P.ambient().size(); ++i) {
        images.push_back(P.contains(i) ? Polynomial(rest) : Polynomial::variable(rest, k++));
    }
    return f.substitute(images, rest);
}

using QuotientValuation = std::variant<ValuationProgram, SeriesDVR>;

struct QuotientValue {
    std::optional<Rational> value;
    // Stages walked (program) or series precision used.
    std::size_t effort = 0;
};

inline QuotientValue quotient_value(const RationalFunction &r, const QuotientValuation &V, std::size_t budget)
{
    if (const auto *p = std::get_if<ValuationProgram>(&V)) {
        if (!(p->variables() == r.variables())) {
            throw std::invalid_argument("quotient program variables do not match the residue field");
        }
        auto res = resolve_value(r, *p, budget);
        if (!res) {
            return {std::nullopt, budget};
        }
        return {res->value, res->stage};
    }
    const auto &s = std::get<SeriesDVR>(V);
    const auto sv = series_value_adaptive(r, s);
    if (!sv.exact) {
        return {std::nullopt, sv.precision};
    }
    return {Rational(static_cast<long>(sv.value)), sv.precision};
}

struct PullbackVerdict {
    enum class Outcome { Member, NonMember, Unknown };
    Outcome outcome = Outcome::Unknown;
    bool in_RP = false;
    std::optional<RationalFunction> residue;
    std::optional<Rational> residue_value;
    std::size_t effort = 0;
};

inline std::string to_string(PullbackVerdict::Outcome o)
{
    switch (o) {
    case PullbackVerdict::Outcome::Member:
        return "true";
    case PullbackVerdict::Outcome::NonMember:
        return "false";
    case PullbackVerdict::Outcome::Unknown:
        return "Unknown";
    }
    return "";
}

// f lies in alpha^{-1}(V) when f is in R_P and its residue lies in V.
inline PullbackVerdict member_pullback(const RationalFunction &f, const CoordinatePrime &P,
                                       const QuotientValuation &V, std::size_t budget = 100)
{
    PullbackVerdict out;
    if (f.is_zero()) {
        out.outcome = PullbackVerdict::Outcome::Member;
        out.in_RP = true;
        return out;
    }
    out.in_RP = member_RP(f, P);
    if (!out.in_RP) {
        out.outcome = PullbackVerdict::Outcome::NonMember;
        return out;
    }
    RationalFunction r = residue(f, P);
    out.residue = r;
    if (r.is_zero()) {
        out.outcome = PullbackVerdict::Outcome::Member;
        return out;
    }
    const auto qv = quotient_value(r, V, budget);
    out.effort = qv.effort;
    if (!qv.value) {
        return out;
    }
    out.residue_value = qv.value;
    out.outcome = *qv.value >= 0 ? PullbackVerdict::Outcome::Member : PullbackVerdict::Outcome::NonMember;
    return out;
}

// Deletes the generators of P from a program that never pivots them.
inline ValuationProgram induced_quotient_program(const ValuationProgram &p, const CoordinatePrime &P)
{
    if (!(p.variables() == P.ambient())) {
        throw std::invalid_argument("program and prime live in different rings");
    }
    auto pivots_prime = [&](const Directive &d) { return P.contains(d.pivot); };
    if (const auto *s = p.periodic()) {
        if (std::any_of(s->preperiod.begin(), s->preperiod.end(), pivots_prime)
            || std::any_of(s->period.begin(), s->period.end(), pivots_prime)) {
            throw std::invalid_argument("program pivots a generator of the prime, so it does not run along R_P");
        }
    } else if (P.contains(p.curve()->base)) {
        throw std::invalid_argument("program pivots a generator of the prime, so it does not run along R_P");
    }
    return drop_coordinates(p, P.generators());
}

// Embeds a program on kappa(P)'s variables into `ambient`; variables not
// present in q are carried along with the given values and never pivoted.
inline ValuationProgram lift_program(const ValuationProgram &q, const Symbols &ambient,
                                     const std::map<std::string, Value> &extra_values)
{
    std::vector<std::size_t> index(q.dimension());
    for (std::size_t i = 0; i < q.dimension(); ++i) {
        auto j = ambient.index_of(q.variables()[i]);
        if (!j) {
            throw std::invalid_argument("variable " + q.variables()[i] + " missing from the ambient ring");
        }
        index[i] = *j;
    }
    std::vector<Value> initial(ambient.size());
    for (std::size_t j = 0; j < ambient.size(); ++j) {
        auto it = std::find(index.begin(), index.end(), j);
        if (it != index.end()) {
            initial[j] = q.initial_values()[static_cast<std::size_t>(it - index.begin())];
        } else {
            auto v = extra_values.find(ambient[j]);
            if (v == extra_values.end()) {
                throw std::invalid_argument("no value given for lifted variable " + ambient[j]);
            }
            initial[j] = v->second;
        }
    }
    auto remap = [&](const Directive &d) {
        Directive r;
        r.pivot = index[d.pivot];
        for (const auto &t : d.translations) {
            r.translations.push_back({index[t.coord], t.constant, t.value});
        }
        return r;
    };
    if (const auto *s = q.periodic()) {
        PeriodicSchedule out;
        for (const auto &d : s->preperiod) {
            out.preperiod.push_back(remap(d));
        }
        for (const auto &d : s->period) {
            out.period.push_back(remap(d));
        }
        return ValuationProgram(ambient, std::move(initial), std::move(out));
    }
    const auto *c = q.curve();
    return ValuationProgram(ambient, std::move(initial), CurveSchedule{index[c->base], index[c->subst], c->stream});
}

// (order along pi, value of the residue of f / pi^order); lexicographic.
struct CompositeValue {
    std::int64_t first = 0;
    std::optional<Rational> second;

    friend bool operator==(const CompositeValue &, const CompositeValue &) = default;
};

// Lexicographic order; both second components must be known.
inline bool lex_less(const CompositeValue &a, const CompositeValue &b)
{
    if (a.first != b.first) {
        return a.first < b.first;
    }
    if (!a.second || !b.second) {
        throw std::domain_error("comparison of composite values with an unresolved residue value");
    }
    return *a.second < *b.second;
}

inline CompositeValue composite_value(const RationalFunction &f, const CoordinatePrime &P, const QuotientValuation &V,
                                      std::size_t budget = 100)
{
    if (f.is_zero()) {
        throw std::domain_error("composite value of zero");
    }
    if (P.generators().size() != 1) {
        throw std::invalid_argument("composite value needs a principal prime (one generator)");
    }
    const std::size_t pi = P.generators().front();
    const auto en = f.numerator().monomial_content()[pi];
    const auto ed = f.denominator().monomial_content()[pi];
    CompositeValue c;
    c.first = static_cast<std::int64_t>(en) - static_cast<std::int64_t>(ed);
    Exponents mn(f.variables().size(), 0), md(f.variables().size(), 0);
    mn[pi] = en;
    md[pi] = ed;
    const RationalFunction unit =
        RationalFunction::from_coprime(f.numerator().divide_monomial(mn), f.denominator().divide_monomial(md));
    c.second = quotient_value(residue(unit, P), V, budget).value;
    return c;
}

} // namespace lqt
