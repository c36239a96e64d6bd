#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace lqt;
using namespace lqt::testing;

namespace
{

const Symbols XY = syms({"x", "y"});
const Symbols XYZ = syms({"x", "y", "z"});

Polynomial P(const std::string &text, const Symbols &vars)
{
    return parse_expr(text, vars).numerator();
}

CoordinatePrime prime(const Symbols &vars, std::vector<std::string> gens)
{
    return CoordinatePrime::by_names(vars, gens);
}

// Elements with a good share of members: numerators often divisible by
// the prime generator, denominators often a power of x times a unit.
RationalFunction corpus_element(Gen &gen, const Symbols &vars, std::size_t pi)
{
    Polynomial num = gen.polynomial(vars, 3, 3);
    Polynomial den = gen.polynomial(vars, 2, 2);
    if (gen.uniform(0, 2) == 0) {
        Exponents e(vars.size(), 0);
        e[pi] = static_cast<std::uint32_t>(gen.uniform(1, 2));
        num = num.multiply_monomial(e);
    }
    if (gen.coin()) {
        Exponents e(vars.size(), 0);
        e[0] = static_cast<std::uint32_t>(gen.uniform(1, 6));
        den = (Polynomial::constant(vars, 1) + gen.polynomial(vars, 2, 2, false)).multiply_monomial(e);
    }
    return RationalFunction(num, den);
}

} // namespace

TEST_CASE("prime membership of polynomials", "[pullback]")
{
    const auto Pz = prime(XYZ, {"z"});
    CHECK(in_prime(P("z", XYZ), Pz));
    CHECK_FALSE(in_prime(P("x + z", XYZ), Pz));
    CHECK(in_prime(P("z*x + z^2*y", XYZ), Pz));
    CHECK(in_prime(Polynomial(XYZ), Pz));
    CHECK_THROWS_AS(prime(XYZ, {}), std::invalid_argument);
    CHECK_THROWS_AS(prime(XYZ, {"x", "y", "z"}), std::invalid_argument);
    CHECK_THROWS_AS(prime(XYZ, {"w"}), std::invalid_argument);
}

TEST_CASE("localization at P and residues", "[pullback]")
{
    const auto Pz = prime(XYZ, {"z"});
    CHECK_FALSE(member_RP(rf("x/z", XYZ), Pz));
    CHECK(member_RP(rf("z/x", XYZ), Pz));
    CHECK(member_RP(rf("(x + z)/(x^2 + y)", XYZ), Pz));
    CHECK(residue(rf("z/x", XYZ), Pz).is_zero());
    CHECK(residue(rf("(x + z)/(y + z^2)", XYZ), Pz) == rf("x/y", XY));
    CHECK(residue(rf("1 + x*z - y*z^3", XYZ), Pz) == rf("1", XY));
    CHECK_THROWS_AS(residue(rf("x/z", XYZ), Pz), std::domain_error);
}

TEST_CASE("pullback membership examples", "[pullback]")
{
    const auto b = load_example("nonarch2d");
    const auto &Py = *b.prime;
    const auto &V = *b.quotient;
    CHECK(member_pullback(rf("y/x^5", XY), Py, V).outcome == PullbackVerdict::Outcome::Member);
    const auto inv = member_pullback(rf("1/x", XY), Py, V);
    CHECK(inv.outcome == PullbackVerdict::Outcome::NonMember);
    CHECK(inv.residue_value == Rational(-1));
    CHECK(member_pullback(rf("x", XY), Py, V).outcome == PullbackVerdict::Outcome::Member);
    const auto out = member_pullback(rf("x/y", XY), Py, V);
    CHECK(out.outcome == PullbackVerdict::Outcome::NonMember);
    CHECK_FALSE(out.in_RP);
}

TEST_CASE("unresolved quotient values are Unknown", "[pullback]")
{
    const auto Pz = prime(XYZ, {"z"});
    SeriesDVR dvr{"x", "y", CoefficientStream::exp(), 4, 8};
    // y - (x + x^2/2 + ... + x^9/9!) has order 10 > 8.
    std::string t = "y - x";
    Integer f = 1;
    for (int k = 2; k <= 9; ++k) {
        f *= k;
        t += " - x^" + std::to_string(k) + "/" + f.get_str();
    }
    const auto v = member_pullback(rf("1/(" + t + ")", XYZ), Pz, dvr);
    CHECK(v.outcome == PullbackVerdict::Outcome::Unknown);
    dvr.max_precision = 16;
    const auto w = member_pullback(rf("1/(" + t + ")", XYZ), Pz, dvr);
    CHECK(w.outcome == PullbackVerdict::Outcome::NonMember);
    CHECK(w.residue_value == Rational(-10));
}

TEST_CASE("induced quotient programs", "[pullback]")
{
    const auto p3 = example_program("ex3.7-3d");
    const auto q = induced_quotient_program(p3, prime(XYZ, {"z"}));
    const auto p2 = example_program("ex3.7-2d");
    CHECK(q.variables() == p2.variables());
    CHECK(q.initial_values() == p2.initial_values());
    for (std::size_t n = 0; n < 8; ++n) {
        CHECK(q.directive(n) == p2.directive(n));
    }

    PeriodicSchedule s;
    s.period.push_back(Directive{0, {}});
    const ValuationProgram px(XY, {Value(1), Value::infinity()}, s);
    const auto qx = induced_quotient_program(px, prime(XY, {"y"}));
    CHECK(qx.variables().names() == std::vector<std::string>{"x"});
    CHECK(qx.directive(3) == Directive{0, {}});

    CHECK_THROWS_AS(induced_quotient_program(p3, prime(XYZ, {"x"})), std::invalid_argument);

    // Lifting back carries z along and reproduces the directives.
    const auto lifted = lift_program(q, XYZ, {{"z", Value(4)}});
    CHECK(lifted.initial_values() == p3.initial_values());
    for (std::size_t n = 0; n < 8; ++n) {
        CHECK(lifted.directive(n) == p3.directive(n));
    }
    CHECK_THROWS(lift_program(q, XYZ, {}));
}

TEST_CASE("series values", "[pullback]")
{
    const SeriesDVR geo{"x", "y", CoefficientStream::geometric(1)};
    CHECK(series_value(rf("x", XY), geo, 16).value == 1);
    CHECK(series_value(rf("x", XY), geo, 16).exact);
    CHECK(series_value(rf("y", XY), geo, 16).value == 1);
    // tau = x + x^3 + x^5 + ...
    const SeriesDVR odd{"x", "y", CoefficientStream::periodic({1, 0})};
    CHECK_FALSE(series_value(rf("y - x", XY), odd, 2).exact);
    const auto at4 = series_value(rf("y - x", XY), odd, 4);
    CHECK(at4.exact);
    CHECK(at4.value == 3);
    CHECK(at4.precision == 4);
    const auto adaptive = series_value_adaptive(rf("(y - x)/x^5", XY), odd);
    CHECK(adaptive.value == -2);
    CHECK_THROWS(series_value(rf("y*z", XYZ), odd, 8));
}

TEST_CASE("composite values", "[pullback]")
{
    const auto b = load_example("nonarch2d");
    CHECK(composite_value(rf("y", XY), *b.prime, *b.quotient) == CompositeValue{1, Rational(0)});
    CHECK(composite_value(rf("x + y", XY), *b.prime, *b.quotient) == CompositeValue{0, Rational(1)});
    const auto e = load_example("ex5.3-shape");
    CHECK(composite_value(rf("x + y", XYZ), *e.prime, *e.quotient) == CompositeValue{0, Rational(1)});
    CHECK(composite_value(rf("z^3*(y - x)/x^2", XYZ), *e.prime, *e.quotient) == CompositeValue{3, Rational(0)});
    CHECK_THROWS_AS(composite_value(rf("x", XYZ), prime(XYZ, {"y", "z"}), *e.quotient), std::invalid_argument);

    CHECK(lex_less({0, Rational(5)}, {1, Rational(-3)}));
    CHECK(lex_less({1, Rational(-3)}, {1, Rational(2)}));
    CHECK_FALSE(lex_less({1, Rational(2)}, {1, Rational(2)}));
}

TEST_CASE("composite values are additive and ultrametric", "[pullback]")
{
    Gen gen(73);
    const auto e = load_example("ex5.3-shape");
    for (int i = 0; i < 60; ++i) {
        const auto f = corpus_element(gen, XYZ, 2), g = corpus_element(gen, XYZ, 2);
        const auto cf = composite_value(f, *e.prime, *e.quotient), cg = composite_value(g, *e.prime, *e.quotient);
        const auto cfg = composite_value(f * g, *e.prime, *e.quotient);
        REQUIRE(cf.second.has_value());
        REQUIRE(cg.second.has_value());
        CHECK(cfg.first == cf.first + cg.first);
        CHECK(cfg.second == *cf.second + *cg.second);
        const auto s = f + g;
        if (!s.is_zero()) {
            const auto cs = composite_value(s, *e.prime, *e.quotient);
            const auto &lo = lex_less(cf, cg) ? cf : cg;
            CHECK_FALSE(lex_less(cs, lo));
        }
    }
}

TEST_CASE("composite value decides membership in the rank 2 ring", "[pullback]")
{
    Gen gen(79);
    const auto e = load_example("ex5.3-shape");
    for (int i = 0; i < 60; ++i) {
        const auto f = corpus_element(gen, XYZ, 2);
        const auto c = composite_value(f, *e.prime, *e.quotient);
        const bool nonneg = !lex_less(c, CompositeValue{0, Rational(0)});
        const auto m = member_pullback(f, *e.prime, *e.quotient);
        REQUIRE(m.outcome != PullbackVerdict::Outcome::Unknown);
        CHECK(nonneg == (m.outcome == PullbackVerdict::Outcome::Member));
    }
}

TEST_CASE("union membership agrees with pullback membership", "[pullback]")
{
    Gen gen(83);
    const auto lifted = dvr_curve_lifted();
    const auto Pz = prime(XYZ, {"z"});
    const SeriesDVR dvr{"x", "y", CoefficientStream::exp()};
    const auto quotient = induced_quotient_program(lifted, Pz);
    REQUIRE(classify_multiplicity(quotient).kind == MultiplicityClass::Kind::Divergent);

    struct Case {
        ValuationProgram program;
        CoordinatePrime P;
        QuotientValuation V;
        std::size_t pi;
    };
    std::vector<Case> cases{{lifted, Pz, dvr, 2}, {lifted, Pz, quotient, 2}};
    for (const char *name : {"nonarch2d", "ex5.3-shape"}) {
        const auto b = load_example(name);
        cases.push_back({b.program, *b.prime, *b.quotient, b.prime->generators().front()});
    }
    for (const auto &c : cases) {
        int members = 0, nonmembers = 0;
        for (int i = 0; i < 40; ++i) {
            const auto f = corpus_element(gen, c.program.variables(), c.pi);
            const auto u = member_S(f, c.program, 100);
            const auto pb = member_pullback(f, c.P, c.V, 100);
            REQUIRE(pb.outcome != PullbackVerdict::Outcome::Unknown);
            const bool in_pb = pb.outcome == PullbackVerdict::Outcome::Member;
            CHECK(u.is_in() == in_pb);
            (in_pb ? members : nonmembers) += 1;
        }
        CHECK(members > 5);
        CHECK(nonmembers > 5);
    }
}

TEST_CASE("the pullback is a ring containing P R_P", "[pullback]")
{
    Gen gen(89);
    const auto e = load_example("ex5.3-shape");
    int pairs = 0;
    for (int i = 0; i < 80 && pairs < 25; ++i) {
        const auto f = corpus_element(gen, XYZ, 2), g = corpus_element(gen, XYZ, 2);
        auto member = [&](const RationalFunction &h) {
            return member_pullback(h, *e.prime, *e.quotient).outcome == PullbackVerdict::Outcome::Member;
        };
        if (!member(f) || !member(g)) {
            continue;
        }
        CHECK(member(f * g));
        if (!(f + g).is_zero()) {
            CHECK(member(f + g));
        }
        ++pairs;
    }
    CHECK(pairs >= 10);

    for (int i = 0; i < 30; ++i) {
        const Polynomial num = gen.polynomial(XYZ).multiply_monomial({0, 0, 1});
        Polynomial den = gen.polynomial(XYZ);
        if (in_prime(den, *e.prime)) {
            den = den + Polynomial::variable(XYZ, 0);
        }
        const RationalFunction f(num, den);
        if (f.is_zero() || !member_RP(f, *e.prime)) {
            continue;
        }
        CHECK(member_pullback(f, *e.prime, *e.quotient).outcome == PullbackVerdict::Outcome::Member);
    }
}

TEST_CASE("the prime generator is divisible by every power of x", "[pullback]")
{
    const auto b = load_example("nonarch2d");
    for (int k = 1; k <= 50; ++k) {
        const auto f = rf("y/x^" + std::to_string(k), XY);
        CHECK(member_pullback(f, *b.prime, *b.quotient).outcome == PullbackVerdict::Outcome::Member);
        CHECK(member_S(f, b.program, 60) == MembershipVerdict::in(static_cast<std::size_t>(k)));
    }
}
