#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace lqt;
using namespace lqt::testing;

namespace
{

const Symbols XY = syms({"x", "y"});
const Symbols XYZ = syms({"x", "y", "z"});

Polynomial P(const std::string &text, const Symbols &vars = XY)
{
    const auto f = parse_expr(text, vars);
    REQUIRE(f.is_polynomial());
    return f.numerator();
}

} // namespace

TEST_CASE("rationals print as p/q and parse back", "[field-arith]")
{
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(-4, 2)) == "-2");
    CHECK(parse_rational("-10/4") == Rational(-5, 2));
    CHECK(parse_rational("+7") == 7);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("polynomial arithmetic examples", "[field-arith]")
{
    const Polynomial x = Polynomial::variable(XY, 0), y = Polynomial::variable(XY, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK(((x + y) * Polynomial(XY)).is_zero());
    // y_1 * x with y_1 = y/x - 1 gives back y - x.
    const RationalFunction y1 = rf("y/x - 1", XY);
    CHECK(y1 * RationalFunction(x) == RationalFunction(y - x));
    CHECK_THROWS_AS(x + Polynomial::variable(XYZ, 0), std::invalid_argument);
}

TEST_CASE("polynomials keep a sparse canonical form", "[field-arith]")
{
    const Polynomial p = P("x^2 + 3*x*y - x^2 + 1");
    CHECK(p.size() == 2);
    CHECK(p.to_string() == "3*x*y + 1");
    CHECK(P("y + x^2").leading_term().exponents == Exponents{2, 0});
    CHECK(P("x^2*y + x^5").min_total_degree() == 3);
    CHECK(P("x^3*y^2 + x*y^4").monomial_content() == Exponents{1, 2});
}

TEST_CASE("gcd examples", "[field-arith]")
{
    CHECK(gcd(P("x^2*y"), P("x*y^2")) == P("x*y"));
    CHECK(gcd(P("x^2 + y"), P("1")) == P("1"));
    CHECK(gcd(P("(x + y)^2"), P("(x + y)*(x - y)")) == P("x + y"));
    CHECK(gcd(P("-2*x - 2*y"), Polynomial(XY)) == P("x + y"));
    // A common factor hidden behind content in both variables.
    CHECK(gcd(P("(x*y + 1)*(x^2 - y)*(2*x + 3)"), P("(x*y + 1)*(x + y^3)*(2*x + 3)")) == P("(x*y + 1)*(2*x + 3)"));
}

TEST_CASE("gcd divides both arguments and leaves coprime cofactors", "[field-arith]")
{
    Gen gen(11);
    for (int i = 0; i < 60; ++i) {
        const Polynomial common = gen.polynomial(XYZ, 2, 2);
        const Polynomial a = common * gen.polynomial(XYZ, 3, 3);
        const Polynomial b = common * gen.polynomial(XYZ, 3, 3);
        const Polynomial g = gcd(a, b);
        REQUIRE(g.leading_coefficient() > 0);
        const auto qa = a.divide_exact(g), qb = b.divide_exact(g);
        REQUIRE(qa.has_value());
        REQUIRE(qb.has_value());
        CHECK(g.divide_exact(common).has_value());
        CHECK(gcd(*qa, *qb).is_constant());
    }
}

TEST_CASE("rational functions are stored in lowest terms", "[field-arith]")
{
    const RationalFunction f = rf("(x^2 - y^2)/(2*x + 2*y)", XY);
    CHECK(f.numerator() == P("1/2*x - 1/2*y"));
    CHECK(f.denominator().is_one());
    const RationalFunction g = rf("(x + 1)/(-2*y)", XY);
    CHECK(g.denominator().leading_coefficient() > 0);
    CHECK(g == rf("-(x + 1)/(2*y)", XY));
    CHECK_THROWS(rf("1/(x - x)", XY));
}

TEST_CASE("ord at the origin", "[field-arith]")
{
    CHECK(ord_at_origin(rf("x^2*y + x^5", XY)) == 3);
    CHECK(ord_at_origin(rf("(x^2 + y^3)/x", XY)) == 1);
    CHECK(ord_at_origin(rf("(1 + x)/(3 - y^2)", XY)) == 0);
    CHECK_THROWS(ord_at_origin(RationalFunction(XY)));
}

TEST_CASE("parse examples and errors", "[field-arith]")
{
    const RationalFunction f = rf("z/(x^2*y^2)", XYZ);
    CHECK(f.numerator() == P("z", XYZ));
    CHECK(f.denominator() == P("x^2*y^2", XYZ));
    CHECK(rf("1", XY) == RationalFunction::constant(XY, 1));
    const RationalFunction g = rf("(y/x - 1)", XY);
    CHECK(g.numerator() == P("y - x"));
    CHECK(g.denominator() == P("x"));

    try {
        rf("x + w", XY);
        FAIL("unknown identifier accepted");
    } catch (const ParseError &e) {
        CHECK(e.position() == 4);
    }
    try {
        rf("x + * y", XY);
        FAIL("syntax error accepted");
    } catch (const ParseError &e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(rf("x/(y - y)", XY), ParseError);
    CHECK_THROWS_AS(rf("", XY), ParseError);
    CHECK_THROWS_AS(rf("(x + y", XY), ParseError);
    CHECK(rf("  x*  y ", XY) == rf("x*y", XY));
}

TEST_CASE("ring axioms on random triples", "[field-arith]")
{
    Gen gen(2024);
    for (int i = 0; i < 40; ++i) {
        const auto a = gen.element(XYZ, 2, 2), b = gen.element(XYZ, 2, 2), c = gen.element(XYZ, 2, 2);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + (-a)).is_zero());
        CHECK(a * a.inverse() == RationalFunction::constant(XYZ, 1));
        CHECK((a - b) + b == a);
    }
}

TEST_CASE("ord is additive and ultrametric", "[field-arith]")
{
    Gen gen(7);
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.element(XYZ), g = gen.element(XYZ);
        CHECK(ord_at_origin(f * g) == ord_at_origin(f) + ord_at_origin(g));
        const auto s = f + g;
        if (!s.is_zero()) {
            CHECK(ord_at_origin(s) >= std::min(ord_at_origin(f), ord_at_origin(g)));
        }
    }
}

TEST_CASE("printing then parsing is the identity", "[field-arith]")
{
    Gen gen(99);
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.element(XYZ);
        CHECK(rf(f.to_string(), XYZ) == f);
    }
}
