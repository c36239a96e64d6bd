#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lqt/pullback.hpp"

namespace lqt
{

class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::size_t line, std::size_t column, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept
    {
        return line_;
    }

    std::size_t column() const noexcept
    {
        return column_;
    }

private:
    std::size_t line_;
    std::size_t column_;
};

// A program together with the optional pullback data it runs along.
struct ProgramBundle {
    std::string name;
    ValuationProgram program;
    std::optional<CoordinatePrime> prime;
    std::optional<QuotientValuation> quotient;
};

namespace detail
{

struct Line {
    std::size_t number;
    std::string text;
};

class ConfigParser
{
public:
    explicit ConfigParser(std::string_view text)
    {
        std::size_t n = 0;
        std::string line;
        std::istringstream in{std::string(text)};
        while (std::getline(in, line)) {
            ++n;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
                line.pop_back();
            }
            lines_.push_back({n, line});
        }
    }

    ProgramBundle parse(const std::string &name)
    {
        std::string section;
        for (const auto &l : lines_) {
            const std::size_t start = l.text.find_first_not_of(" \t");
            if (start == std::string::npos) {
                continue;
            }
            const std::string body = l.text.substr(start);
            if (body.front() == '[') {
                if (body.back() != ']') {
                    throw ConfigError(l.number, start + 1, "unterminated section header");
                }
                section = body.substr(1, body.size() - 2);
                if (section != "vars" && section != "values" && section != "preperiod" && section != "period"
                    && section != "curve" && section != "pullback") {
                    throw ConfigError(l.number, start + 1, "unknown section [" + section + "]");
                }
                if (!seen_.insert(section).second) {
                    throw ConfigError(l.number, start + 1, "duplicate section [" + section + "]");
                }
                continue;
            }
            if (section.empty()) {
                throw ConfigError(l.number, start + 1, "content before the first section");
            }
            entries_[section].push_back({l.number, l.text});
        }
        return build(name);
    }

private:
    struct Cursor {
        const Line &line;
        std::size_t pos = 0;

        void skip()
        {
            while (pos < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[pos]))) {
                ++pos;
            }
        }

        bool done()
        {
            skip();
            return pos >= line.text.size();
        }

        [[noreturn]] void fail_at(std::size_t at, const std::string &what) const
        {
            throw ConfigError(line.number, at + 1, what);
        }

        [[noreturn]] void fail(const std::string &what) const
        {
            throw ConfigError(line.number, pos + 1, what);
        }

        std::string word()
        {
            skip();
            const std::size_t b = pos;
            while (pos < line.text.size()
                   && (std::isalnum(static_cast<unsigned char>(line.text[pos])) || line.text[pos] == '_')) {
                ++pos;
            }
            if (b == pos) {
                fail("expected a name");
            }
            return line.text.substr(b, pos - b);
        }

        void expect(std::string_view lit)
        {
            skip();
            if (line.text.compare(pos, lit.size(), lit) != 0) {
                fail("expected '" + std::string(lit) + "'");
            }
            pos += lit.size();
        }

        bool accept(std::string_view lit)
        {
            skip();
            if (line.text.compare(pos, lit.size(), lit) == 0) {
                pos += lit.size();
                return true;
            }
            return false;
        }

        Rational rational()
        {
            skip();
            const std::size_t b = pos;
            if (pos < line.text.size() && (line.text[pos] == '-' || line.text[pos] == '+')) {
                ++pos;
            }
            while (pos < line.text.size()
                   && (std::isdigit(static_cast<unsigned char>(line.text[pos])) || line.text[pos] == '/')) {
                ++pos;
            }
            try {
                return parse_rational(std::string_view(line.text).substr(b, pos - b));
            } catch (const std::invalid_argument &e) {
                pos = b;
                fail(e.what());
            }
        }
    };

    std::size_t var_index(Cursor &c, const std::string &name) const
    {
        auto i = vars_.index_of(name);
        if (!i) {
            c.pos -= name.size();
            c.fail("unknown variable '" + name + "'");
        }
        return *i;
    }

    Directive directive(const Line &l) const
    {
        Cursor c{l};
        c.expect("pivot");
        c.expect("=");
        Directive d;
        d.pivot = var_index(c, c.word());
        if (c.done()) {
            return d;
        }
        c.expect("translate");
        if (c.done()) {
            c.fail("expected at least one translation");
        }
        while (!c.done()) {
            Translation t;
            t.coord = var_index(c, c.word());
            if (t.coord == d.pivot) {
                c.fail("the pivot cannot be translated");
            }
            if (d.translation_of(t.coord)) {
                c.fail("coordinate translated twice");
            }
            c.expect(":");
            c.skip();
            const std::size_t at_constant = c.pos;
            t.constant = c.rational();
            if (t.constant == 0) {
                c.fail_at(at_constant, "translation constant must be nonzero");
            }
            c.expect("->");
            c.skip();
            const std::size_t at_amount = c.pos;
            t.value.amount = c.rational();
            if (t.value.amount <= 0) {
                c.fail_at(at_amount, "assigned value must be positive");
            }
            if (c.accept("*")) {
                c.expect("pivot");
                t.value.relative_to_pivot = true;
            }
            d.translations.push_back(std::move(t));
        }
        return d;
    }

    CoefficientStream series(Cursor &c, std::size_t &base) const
    {
        c.expect("pattern");
        c.expect("(");
        const std::size_t kind_pos = c.pos;
        const std::string kind = c.word();
        c.expect(",");
        base = var_index(c, c.word());
        std::vector<Rational> args;
        while (c.accept(",")) {
            args.push_back(c.rational());
        }
        c.expect(")");
        if (!c.done()) {
            c.fail("unexpected text after series pattern");
        }
        auto want = [&](std::size_t n) {
            if (args.size() != n) {
                c.pos = kind_pos;
                c.fail("pattern " + kind + " takes " + std::to_string(n) + " argument(s) after the variable");
            }
        };
        if (kind == "exp") {
            want(0);
            return CoefficientStream::exp();
        }
        if (kind == "factorial_gap") {
            want(0);
            return CoefficientStream::factorial_gap();
        }
        if (kind == "geometric") {
            want(1);
            return CoefficientStream::geometric(args[0]);
        }
        if (kind == "periodic") {
            if (args.empty()) {
                c.pos = kind_pos;
                c.fail("pattern periodic needs a coefficient list");
            }
            return CoefficientStream::periodic(args);
        }
        c.pos = kind_pos;
        c.fail("unknown series pattern '" + kind + "'");
    }

    ProgramBundle build(const std::string &name)
    {
        if (!entries_.count("vars")) {
            throw ConfigError(lines_.size(), 1, "missing [vars] section");
        }
        std::vector<std::string> names;
        for (const auto &l : entries_["vars"]) {
            Cursor c{l};
            while (!c.done()) {
                c.accept(",");
                if (c.done()) {
                    break;
                }
                const std::size_t at = c.pos;
                std::string w = c.word();
                if (std::find(names.begin(), names.end(), w) != names.end()) {
                    c.pos = at;
                    c.fail("duplicate variable '" + w + "'");
                }
                names.push_back(std::move(w));
            }
        }
        if (names.empty()) {
            throw ConfigError(lines_.size(), 1, "no variables declared");
        }
        vars_ = Symbols(names);

        std::vector<std::optional<Value>> values(names.size());
        for (const auto &l : entries_["values"]) {
            Cursor c{l};
            const std::size_t i = var_index(c, c.word());
            if (values[i]) {
                c.fail("value of " + names[i] + " given twice");
            }
            c.expect("=");
            if (c.accept("inf")) {
                values[i] = Value::infinity();
            } else {
                c.skip();
                const std::size_t at = c.pos;
                const Rational q = c.rational();
                if (q <= 0) {
                    c.fail_at(at, "values must be positive");
                }
                values[i] = Value(q);
            }
            if (!c.done()) {
                c.fail("unexpected text after value");
            }
        }

        std::optional<CurveSchedule> curve;
        const Line *curve_line = nullptr;
        for (const auto &l : entries_["curve"]) {
            Cursor c{l};
            if (curve) {
                c.fail("only one curve series is allowed");
            }
            c.expect("series");
            const std::size_t subst = var_index(c, c.word());
            c.expect("=");
            std::size_t base = 0;
            CoefficientStream s = series(c, base);
            if (base == subst) {
                c.fail("series variable and substituted variable must differ");
            }
            curve = CurveSchedule{base, subst, s};
            curve_line = &l;
        }

        PeriodicSchedule periodic;
        for (const auto &l : entries_["preperiod"]) {
            periodic.preperiod.push_back(directive(l));
        }
        for (const auto &l : entries_["period"]) {
            periodic.period.push_back(directive(l));
        }
        if (curve && (!periodic.preperiod.empty() || !periodic.period.empty())) {
            throw ConfigError(curve_line->number, 1, "a [curve] program cannot also have [preperiod] or [period]");
        }
        if (!curve && periodic.period.empty()) {
            throw ConfigError(lines_.size(), 1, "missing [period] (or [curve]) section");
        }

        std::vector<Value> initial(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (values[i]) {
                initial[i] = *values[i];
            } else if (!(curve && curve->subst == i)) {
                throw ConfigError(lines_.size(), 1, "no value given for " + names[i]);
            } else {
                initial[i] = Value(1);
            }
        }

        auto bundle = [&]() -> ProgramBundle {
            try {
                if (curve) {
                    ValuationProgram p(vars_, initial, *curve);
                    if (values[curve->subst] && !(*values[curve->subst] == p.initial_values()[curve->subst])) {
                        throw ConfigError(curve_line->number, 1,
                                          "value of " + names[curve->subst] + " must be "
                                              + p.initial_values()[curve->subst].to_string()
                                              + " to match the series");
                    }
                    return ProgramBundle{name, p, std::nullopt, std::nullopt};
                }
                return ProgramBundle{name, ValuationProgram(vars_, initial, periodic), std::nullopt, std::nullopt};
            } catch (const std::invalid_argument &e) {
                throw ConfigError(lines_.size(), 1, e.what());
            }
        }();

        std::optional<SeriesDVR> dvr;
        for (const auto &l : entries_["pullback"]) {
            Cursor c{l};
            if (c.accept("prime")) {
                if (bundle.prime) {
                    c.fail("prime given twice");
                }
                c.expect("=");
                c.expect("[");
                std::vector<std::size_t> gens;
                while (!c.accept("]")) {
                    if (!gens.empty()) {
                        c.expect(",");
                    }
                    gens.push_back(var_index(c, c.word()));
                }
                if (!c.done()) {
                    c.fail("unexpected text after prime");
                }
                try {
                    bundle.prime = CoordinatePrime(vars_, gens);
                } catch (const std::exception &e) {
                    c.fail(e.what());
                }
            } else if (c.accept("series")) {
                if (dvr) {
                    c.fail("series given twice");
                }
                const std::string subst = c.word();
                var_index(c, subst);
                c.expect("=");
                std::size_t base = 0;
                CoefficientStream s = series(c, base);
                dvr = SeriesDVR{names[base], subst, s};
            } else {
                c.fail("expected 'prime' or 'series'");
            }
        }
        if (dvr && !bundle.prime) {
            throw ConfigError(lines_.size(), 1, "a pullback series needs a prime");
        }
        if (bundle.prime) {
            try {
                if (dvr) {
                    const auto &rv = bundle.prime->residue_variables();
                    if (!rv.index_of(dvr->base) || !rv.index_of(dvr->subst)) {
                        throw std::invalid_argument("series variables must lie outside the prime");
                    }
                    bundle.quotient = *dvr;
                } else {
                    bundle.quotient = induced_quotient_program(bundle.program, *bundle.prime);
                }
            } catch (const std::invalid_argument &e) {
                throw ConfigError(lines_.size(), 1, e.what());
            }
        }
        return bundle;
    }

    std::vector<Line> lines_;
    std::set<std::string> seen_;
    std::map<std::string, std::vector<Line>> entries_;
    Symbols vars_;
};

} // namespace detail

// Grammar (one statement per line, '#' starts a comment):
//   [vars]       x, y, z
//   [values]     x = 1        z = inf
//   [preperiod]  directives applied once, in order
//   [period]     directives repeated forever
//                  pivot=<var> [translate <var>:<c>-><value> ...]
//                  <value> is a positive rational, or r*pivot for r times
//                  the pivot's current value
//   [curve]      series <var> = pattern(<kind>, <var>[, args])   (instead of a period)
//   [pullback]   prime = [<var>, ...]
//                series <var> = pattern(<kind>, <var>[, args])
// Pattern kinds: exp, factorial_gap, geometric(r), periodic(c1, c2, ...).
inline ProgramBundle parse_config(std::string_view text, const std::string &name = "config")
{
    return detail::ConfigParser(text).parse(name);
}

inline ProgramBundle load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, 0, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace lqt
