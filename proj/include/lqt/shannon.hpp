#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lqt/program.hpp"

namespace lqt
{

struct MembershipVerdict {
    enum class Outcome { In, NotWithinBudget };
    Outcome outcome = Outcome::NotWithinBudget;
    // Stage of membership for In, the exhausted budget otherwise.
    std::size_t stage = 0;

    bool is_in() const noexcept
    {
        return outcome == Outcome::In;
    }

    static MembershipVerdict in(std::size_t n)
    {
        return {Outcome::In, n};
    }

    static MembershipVerdict not_within(std::size_t budget)
    {
        return {Outcome::NotWithinBudget, budget};
    }

    friend bool operator==(const MembershipVerdict &, const MembershipVerdict &) = default;
};

class BudgetExhausted : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A strict transform walking the charts of one program.
class ProgramWalk
{
public:
    ProgramWalk(const RationalFunction &f, const ValuationProgram &p) : session_(p.session()), st_(f) {}

    std::size_t stage() const noexcept
    {
        return st_.stage();
    }

    const StrictTransform &element() const noexcept
    {
        return st_;
    }

    const Directive &next_directive()
    {
        return session_.directive(st_.stage());
    }

    void step()
    {
        const std::size_t n = st_.stage();
        st_.step(session_.directive(n), session_.images(n), session_.coords(n + 1));
    }

    // One step of the principal ideal transform: after moving to the next
    // chart, divide by the new pivot to the old order.
    void transform_step()
    {
        const Integer o = st_.ord();
        const std::size_t p = session_.directive(st_.stage()).pivot;
        step();
        st_.divide_coordinate(p, o);
    }

private:
    ChartSession session_;
    StrictTransform st_;
};

// Least n <= budget with f in R_n.
inline MembershipVerdict member_S(const RationalFunction &f, const ValuationProgram &p, std::size_t budget)
{
    if (f.is_zero()) {
        return MembershipVerdict::in(0);
    }
    ProgramWalk walk(f, p);
    for (;;) {
        if (walk.element().in_ring()) {
            return MembershipVerdict::in(walk.stage());
        }
        if (walk.stage() >= budget) {
            return MembershipVerdict::not_within(budget);
        }
        walk.step();
    }
}

struct LimitTrace {
    std::vector<std::pair<std::size_t, Rational>> approximants;
    std::optional<Rational> stabilized;
};

inline constexpr std::size_t stabilization_window = 5;

inline void mark_stabilized(LimitTrace &t, std::size_t window = stabilization_window)
{
    t.stabilized.reset();
    const auto &a = t.approximants;
    if (a.size() < window) {
        return;
    }
    for (std::size_t i = a.size() - window; i < a.size(); ++i) {
        if (a[i].second != a.back().second) {
            return;
        }
    }
    t.stabilized = a.back().second;
}

// Orders of the successive transforms of aR_n, n the membership stage of a
// (or `start` when given, which must not precede it). Approximants cover
// stages n .. n + steps.
inline LimitTrace e_approx(const RationalFunction &a, const ValuationProgram &p, std::size_t budget,
                           std::size_t steps = 20, std::optional<std::size_t> start = std::nullopt)
{
    if (a.is_zero()) {
        throw std::domain_error("e is defined for nonzero elements");
    }
    const auto m = member_S(a, p, budget);
    if (!m.is_in()) {
        throw BudgetExhausted("element not verified in S within " + std::to_string(budget) + " stages");
    }
    const std::size_t n0 = start.value_or(m.stage);
    if (n0 < m.stage) {
        throw std::invalid_argument("start stage precedes membership stage " + std::to_string(m.stage));
    }
    ProgramWalk walk(a, p);
    while (walk.stage() < n0) {
        walk.step();
    }
    LimitTrace t;
    for (std::size_t i = 0;; ++i) {
        t.approximants.emplace_back(walk.stage(), Rational(walk.element().ord()));
        if (i == steps) {
            break;
        }
        walk.transform_step();
    }
    mark_stabilized(t);
    return t;
}

// ord_n(q) / ord_n(x_ref) at stages 0 .. budget.
inline LimitTrace w_approx(const RationalFunction &q, const RationalFunction &x_ref, const ValuationProgram &p,
                           std::size_t budget)
{
    if (q.is_zero() || x_ref.is_zero()) {
        throw std::domain_error("w is defined for nonzero elements");
    }
    ProgramWalk wq(q, p), wx(x_ref, p);
    LimitTrace t;
    for (std::size_t n = 0;; ++n) {
        const Integer ox = wx.element().ord();
        if (ox == 0) {
            throw std::domain_error("reference element has order 0 at stage " + std::to_string(n));
        }
        t.approximants.emplace_back(n, Rational(wq.element().ord(), ox));
        t.approximants.back().second.canonicalize();
        if (n == budget) {
            break;
        }
        wq.step();
        wx.step();
    }
    mark_stabilized(t);
    return t;
}

enum class ShannonClass { ValuationRing, ArchimedeanNonValuation, NonArchimedean, Unknown };

inline std::string to_string(ShannonClass c)
{
    switch (c) {
    case ShannonClass::ValuationRing:
        return "ValuationRing";
    case ShannonClass::ArchimedeanNonValuation:
        return "ArchimedeanNonValuation";
    case ShannonClass::NonArchimedean:
        return "NonArchimedean";
    case ShannonClass::Unknown:
        return "Unknown";
    }
    return "";
}

struct ShannonReport {
    ShannonClass kind = ShannonClass::Unknown;
    MultiplicityClass multiplicity;
    // Coordinate never divided by in the period (archimedean case), or
    // the infinite-value coordinates generating the prime (non-archimedean).
    std::vector<std::size_t> witnesses;
};

inline ShannonReport classify_shannon(const ValuationProgram &p)
{
    ShannonReport r;
    r.multiplicity = classify_multiplicity(p);
    const auto infinite = p.infinite_coordinates();
    if (!infinite.empty()) {
        // Runs along the prime of the infinite coordinates: the quotient
        // program decides, and divergence there makes S a pullback.
        const auto quotient = drop_coordinates(p, infinite);
        r.multiplicity = classify_multiplicity(quotient);
        if (r.multiplicity.kind == MultiplicityClass::Kind::Divergent) {
            r.kind = ShannonClass::NonArchimedean;
            r.witnesses = infinite;
        }
        return r;
    }
    switch (r.multiplicity.kind) {
    case MultiplicityClass::Kind::Divergent:
        r.kind = ShannonClass::ValuationRing;
        break;
    case MultiplicityClass::Kind::Convergent:
        if (const auto *s = p.periodic()) {
            for (std::size_t j = 0; j < p.dimension(); ++j) {
                bool pivoted = false;
                for (const auto &d : s->period) {
                    pivoted = pivoted || d.pivot == j;
                }
                if (!pivoted) {
                    r.witnesses.push_back(j);
                }
            }
        }
        if (!r.witnesses.empty()) {
            r.kind = ShannonClass::ArchimedeanNonValuation;
        }
        break;
    case MultiplicityClass::Kind::Undecided:
        break;
    }
    return r;
}

} // namespace lqt
