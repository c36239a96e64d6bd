#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lqt/config.hpp"

namespace lqt
{

// One CLI invocation whose output is pinned, plus the hand-known values
// inside it (JSON pointer into the named record -> expected string).
struct ManifestCheck {
    std::vector<std::string> args;
    std::size_t record = 0;
    std::vector<std::pair<std::string, std::string>> expect;
};

struct ExampleEntry {
    std::string name;
    std::string summary;
    std::string config;
    std::vector<ManifestCheck> manifest;
};

inline const std::vector<ExampleEntry> &example_registry()
{
    static const std::vector<ExampleEntry> registry = {
        {"ex3.7-2d",
         "Rational rank 1 valuation on k(x,y): translate every other step, multiplicities halve in pairs",
         R"(# x_1 = x, y_1 = y/x - 1 with v(y_1) = v(x_1)/2, then divide by y.
[vars]
x, y
[values]
x = 1
y = 1
[period]
pivot=x translate y:1->1/2*pivot
pivot=y
)",
         {
             // Values after steps 1-4 as stated in the worked example.
             {{"run", "--steps", "4"},
              1,
              {{"/values/0", "1"}, {"/values/1", "1/2"}}},
             {{"run", "--steps", "4"}, 2, {{"/values/0", "1/2"}, {"/values/1", "1/2"}}},
             {{"run", "--steps", "4"}, 3, {{"/values/0", "1/2"}, {"/values/1", "1/4"}}},
             {{"run", "--steps", "4"}, 4, {{"/values/0", "1/4"}, {"/values/1", "1/4"}}},
             // The seven listed multiplicities; their sum by hand.
             {{"multiplicity", "-n", "7", "--sum"},
              0,
              {{"/sequence/0", "1"},
               {"/sequence/1", "1/2"},
               {"/sequence/2", "1/2"},
               {"/sequence/3", "1/4"},
               {"/sequence/4", "1/4"},
               {"/sequence/5", "1/8"},
               {"/sequence/6", "1/8"},
               {"/sum", "11/4"}}},
             // Limit stated in the example; every coordinate pivots, so no witness.
             {{"classify"}, 0, {{"/multiplicity", "Convergent"}, {"/limit", "3"}, {"/shannon", "Unknown"}}},
             // y - x = x_1 y_1 after one step: 1 + 1/2.
             {{"value", "-e", "y - x"}, 0, {{"/value", "3/2"}, {"/stage", "1"}}},
             {{"wapprox", "-e", "y - x", "--budget", "12"}, 0, {{"/stabilized", "3/2"}}},
             {{"eapprox", "-e", "x", "--budget", "6"}, 0, {{"/approximants/0/value", "1"}, {"/stabilized", "0"}}},
         }},
        {"ex3.7-3d",
         "The same steps in k(x,y,z) with v(z) = 4; z is never divided by",
         R"(# z only loses the pivot value at each step.
[vars]
x, y, z
[values]
x = 1
y = 1
z = 4
[period]
pivot=x translate y:1->1/2*pivot
pivot=y
[pullback]
prime = [z]
)",
         {
             // v(z) = 4, v(z_1) = 3, v(z_2) = 4 - 3/2 as stated.
             {{"run", "--steps", "2"}, 0, {{"/values/2", "4"}}},
             {{"run", "--steps", "2"}, 1, {{"/values/2", "3"}}},
             {{"run", "--steps", "2"}, 2, {{"/values/2", "5/2"}}},
             {{"classify"},
              0,
              {{"/multiplicity", "Convergent"}, {"/limit", "3"}, {"/shannon", "ArchimedeanNonValuation"}}},
             // z_1 = z/x; x/z stays outside since z is never a pivot.
             {{"member", "-e", "z/x"}, 0, {{"/outcome", "In"}, {"/stage", "1"}}},
             {{"member", "-e", "x/z", "--budget", "200"}, 0, {{"/outcome", "NotWithinBudget"}, {"/budget", "200"}}},
             // v(z) = v(x^2 y^2) = 4.
             {{"value", "-e", "z/(x^2*y^2)"}, 0, {{"/value", "0"}}},
         }},
        {"ex5.3-shape",
         "Pullback along P = (z) of the DVR y = sum x^(j!) on k(x,y); rank 2",
         R"(# The curve program carries z along with infinite value.
[vars]
x, y, z
[values]
x = 1
z = inf
[curve]
series y = pattern(factorial_gap, x)
[pullback]
prime = [z]
series y = pattern(factorial_gap, x)
)",
         {
             // Residue x + y has x-order 1 (tau = x + x^2 + x^6 + ...), no z.
             {{"composite", "-e", "x + y"}, 0, {{"/first", "0"}, {"/second", "1"}}},
             {{"composite", "-e", "z^2/(x + y)"}, 0, {{"/first", "2"}, {"/second", "-1"}}},
             {{"classify"}, 0, {{"/multiplicity", "Divergent"}, {"/shannon", "NonArchimedean"}}},
             {{"member", "-e", "z/x^3", "--mode", "both"},
              0,
              {{"/union/outcome", "In"}, {"/pullback/outcome", "true"}, {"/agreement", "true"}}},
         }},
        {"nonarch2d",
         "alpha^{-1}(k[x]_(x)) for A = k(x)[y]_(y): divide by x forever, y carried along",
         R"(# y has infinite value; the quotient is the x-adic DVR on k(x).
[vars]
x, y
[values]
x = 1
y = inf
[period]
pivot=x
[pullback]
prime = [y]
)",
         {
             // Residue of y/x^5 is 0; y_5 = y/x^5.
             {{"member", "-e", "y/x^5", "--mode", "both"},
              0,
              {{"/union/outcome", "In"},
               {"/union/stage", "5"},
               {"/pullback/outcome", "true"},
               {"/agreement", "true"}}},
             // Residue 1/x has x-order -1.
             {{"member", "-e", "1/x", "--mode", "both"},
              0,
              {{"/union/outcome", "NotWithinBudget"}, {"/pullback/outcome", "false"}, {"/agreement", "true"}}},
             {{"classify"}, 0, {{"/multiplicity", "Divergent"}, {"/shannon", "NonArchimedean"}}},
         }},
        {"dvr-curve",
         "The DVR y = exp(x) - 1 on k(x,y): always divide by x, translate by 1/k!",
         R"(# Constant multiplicity 1, so the union is the DVR itself.
[vars]
x, y
[values]
x = 1
[curve]
series y = pattern(exp, x)
)",
         {
             {{"run", "--steps", "3"}, 3, {{"/values/0", "1"}, {"/values/1", "1"}, {"/multiplicity", "1"}}},
             {{"classify"}, 0, {{"/multiplicity", "Divergent"}, {"/shannon", "ValuationRing"}}},
             // y - x = x^2/2 + ...: after one step it is x_1 y_1 with v(y_1) = 1.
             {{"value", "-e", "y - x"}, 0, {{"/value", "2"}, {"/stage", "1"}}},
         }},
    };
    return registry;
}

inline std::string canonical_example_name(const std::string &name)
{
    return name == "ex3.7" ? "ex3.7-3d" : name;
}

inline const ExampleEntry &find_example(const std::string &name)
{
    const std::string key = canonical_example_name(name);
    for (const auto &e : example_registry()) {
        if (e.name == key) {
            return e;
        }
    }
    std::string known;
    for (const auto &e : example_registry()) {
        known += (known.empty() ? "" : ", ") + e.name;
    }
    throw std::invalid_argument("unknown example '" + name + "' (known: " + known + ", ex3.7)");
}

inline ProgramBundle load_example(const std::string &name)
{
    const auto &e = find_example(name);
    return parse_config(e.config, e.name);
}

} // namespace lqt
