#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lqt/examples.hpp"
#include "lqt/parser.hpp"
#include "lqt/shannon.hpp"

namespace lqt
{

namespace cli
{

using Json = nlohmann::ordered_json;

inline constexpr const char *schema = "lqt/1";

enum Exit { ok = 0, internal = 1, usage = 2, inconsistent = 3, exhausted = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string example;
    std::string config;
    std::size_t steps = 10;
    std::size_t budget = 100;
    std::size_t precision = 1024;
    std::string expr;
    std::string mode = "union";
    bool sum = false;
    std::size_t count = 10;
    std::string ref;
    std::string corpus;
    std::string format = "json";
    bool strict = false;
    bool budget_given = false;
};

class Emitter
{
public:
    Emitter(std::ostream &out, std::string format) : out_(out), format_(std::move(format)) {}

    void emit(Json record)
    {
        if (format_ == "table") {
            for (const auto &[k, v] : record.items()) {
                if (k == "schema") {
                    continue;
                }
                out_ << k << std::string(k.size() < 14 ? 14 - k.size() : 1, ' ') << flat(v) << "\n";
            }
            out_ << "\n";
        } else {
            out_ << record.dump() << "\n";
        }
    }

private:
    static std::string flat(const Json &v)
    {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_array()) {
            std::string s;
            for (const auto &e : v) {
                s += (s.empty() ? "" : ", ") + flat(e);
            }
            return s;
        }
        return v.dump();
    }

    std::ostream &out_;
    std::string format_;
};

class Session
{
public:
    Session(const Options &o, std::ostream &out) : opts_(o), emit_(out, o.format), bundle_(load(o)) {}

    const ProgramBundle &bundle() const noexcept
    {
        return bundle_;
    }

    Json record(const std::string &command) const
    {
        Json j;
        j["schema"] = schema;
        j["command"] = command;
        j["example"] = bundle_.name;
        return j;
    }

    void emit(Json j)
    {
        emit_.emit(std::move(j));
    }

    RationalFunction element(const std::string &text, bool nonzero = true) const
    {
        RationalFunction f = parse_expr(text, bundle_.program.variables());
        if (nonzero && f.is_zero()) {
            throw UsageError("element must be nonzero");
        }
        return f;
    }

    const Options &opts() const noexcept
    {
        return opts_;
    }

private:
    static ProgramBundle load(const Options &o)
    {
        if (!o.config.empty() && !o.example.empty()) {
            throw UsageError("give either --example or --config, not both");
        }
        if (!o.config.empty()) {
            return load_config(o.config);
        }
        return load_example(o.example.empty() ? "ex3.7" : o.example);
    }

    Options opts_;
    Emitter emit_;
    ProgramBundle bundle_;
};

inline Json values_json(const std::vector<Value> &v)
{
    Json a = Json::array();
    for (const auto &x : v) {
        a.push_back(x.to_string());
    }
    return a;
}

inline Json names_json(const Symbols &s)
{
    Json a = Json::array();
    for (const auto &n : s.names()) {
        a.push_back(n);
    }
    return a;
}

inline Json trace_json(const LimitTrace &t)
{
    Json a = Json::array();
    for (const auto &[n, q] : t.approximants) {
        Json e;
        e["stage"] = n;
        e["value"] = to_string(q);
        a.push_back(e);
    }
    return a;
}

inline int cmd_run(Session &s)
{
    const auto &p = s.bundle().program;
    ValueTrace trace(p);
    for (std::size_t n = 0; n <= s.opts().steps; ++n) {
        const auto &vals = trace.at(n);
        const Symbols coords = stage_symbols(p.variables(), n);
        const Directive d = p.directive(n);
        Json j = s.record("run");
        j["stage"] = n;
        j["coords"] = names_json(coords);
        j["values"] = values_json(vals);
        j["multiplicity"] = to_string(trace.multiplicity(n));
        j["pivot"] = coords[d.pivot];
        Json tr = Json::array();
        for (const auto &t : d.translations) {
            Json e;
            e["coord"] = coords[t.coord];
            e["constant"] = to_string(t.constant);
            const Rational v = t.value.relative_to_pivot ? Rational(t.value.amount * vals[d.pivot].finite())
                                                         : t.value.amount;
            e["value"] = to_string(v);
            tr.push_back(e);
        }
        j["translations"] = tr;
        s.emit(j);
    }
    return ok;
}

inline Json union_json(const MembershipVerdict &v)
{
    Json j;
    if (v.is_in()) {
        j["outcome"] = "In";
        j["stage"] = v.stage;
    } else {
        j["outcome"] = "NotWithinBudget";
        j["budget"] = v.stage;
    }
    return j;
}

inline Json pullback_json(const PullbackVerdict &v)
{
    Json j;
    j["outcome"] = to_string(v.outcome);
    j["in_RP"] = v.in_RP;
    j["residue"] = v.residue ? Json(v.residue->to_string()) : Json(nullptr);
    j["residue_value"] = v.residue_value ? Json(to_string(*v.residue_value)) : Json(nullptr);
    return j;
}

inline QuotientValuation quotient_for(const Session &s)
{
    const auto &b = s.bundle();
    if (!b.prime || !b.quotient) {
        throw UsageError("example has no prime; pullback mode needs a [pullback] section");
    }
    QuotientValuation q = *b.quotient;
    if (auto *dvr = std::get_if<SeriesDVR>(&q)) {
        dvr->max_precision = s.opts().precision;
        dvr->initial_precision = std::min(dvr->initial_precision, dvr->max_precision);
    }
    return q;
}

inline int member_one(Session &s, const std::string &text)
{
    const auto &o = s.opts();
    const RationalFunction f = s.element(text);
    Json j = s.record("member");
    j["element"] = f.to_string();
    j["mode"] = o.mode;
    bool undecided = false;
    std::optional<MembershipVerdict> u;
    std::optional<PullbackVerdict> pb;
    if (o.mode == "union" || o.mode == "both") {
        u = member_S(f, s.bundle().program, o.budget);
        undecided = undecided || !u->is_in();
    }
    if (o.mode == "pullback" || o.mode == "both") {
        pb = member_pullback(f, *s.bundle().prime, quotient_for(s), o.budget);
        undecided = undecided || pb->outcome == PullbackVerdict::Outcome::Unknown;
    }
    if (o.mode == "union") {
        j.update(union_json(*u));
    } else if (o.mode == "pullback") {
        j.update(pullback_json(*pb));
    } else {
        j["union"] = union_json(*u);
        j["pullback"] = pullback_json(*pb);
        if (pb->outcome == PullbackVerdict::Outcome::Unknown) {
            j["agreement"] = nullptr;
        } else {
            j["agreement"] = u->is_in() == (pb->outcome == PullbackVerdict::Outcome::Member);
        }
    }
    s.emit(j);
    return undecided && o.strict ? exhausted : ok;
}

inline int cmd_member(Session &s)
{
    const auto &o = s.opts();
    if (o.mode != "union" && o.mode != "pullback" && o.mode != "both") {
        throw UsageError("--mode must be union, pullback or both");
    }
    if (o.mode != "union") {
        quotient_for(s);
    }
    if (o.corpus.empty()) {
        if (o.expr.empty()) {
            throw UsageError("member needs -e EXPR or --corpus FILE");
        }
        return member_one(s, o.expr);
    }
    std::ifstream in(o.corpus);
    if (!in) {
        throw UsageError("cannot open corpus " + o.corpus);
    }
    int status = ok;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        status = std::max(status, member_one(s, line));
    }
    return status;
}

inline int cmd_classify(Session &s)
{
    const auto r = classify_shannon(s.bundle().program);
    Json j = s.record("classify");
    j["multiplicity"] = to_string(r.multiplicity.kind);
    j["limit"] = r.multiplicity.limit ? Json(to_string(*r.multiplicity.limit)) : Json(nullptr);
    j["ratio"] = r.multiplicity.ratio ? Json(to_string(*r.multiplicity.ratio)) : Json(nullptr);
    j["shannon"] = to_string(r.kind);
    Json w = Json::array();
    for (auto i : r.witnesses) {
        w.push_back(s.bundle().program.variables()[i]);
    }
    j["witnesses"] = w;
    s.emit(j);
    return ok;
}

inline int cmd_multiplicity(Session &s)
{
    const auto seq = multiplicity_sequence(s.bundle().program, s.opts().count);
    Json j = s.record("multiplicity");
    j["n"] = seq.size();
    Json a = Json::array();
    Rational sum = 0;
    for (const auto &q : seq) {
        a.push_back(to_string(q));
        sum += q;
    }
    j["sequence"] = a;
    if (s.opts().sum) {
        j["sum"] = to_string(sum);
    }
    s.emit(j);
    return ok;
}

inline int cmd_value(Session &s)
{
    const RationalFunction f = s.element(s.opts().expr);
    const auto r = resolve_value(f, s.bundle().program, s.opts().budget);
    Json j = s.record("value");
    j["element"] = f.to_string();
    j["resolved"] = r.has_value();
    j["stage"] = r ? Json(r->stage) : Json(nullptr);
    j["value"] = r && r->value ? Json(to_string(*r->value)) : Json(nullptr);
    j["budget"] = s.opts().budget;
    s.emit(j);
    return !r && s.opts().strict ? exhausted : ok;
}

inline int cmd_wapprox(Session &s)
{
    const auto &p = s.bundle().program;
    const RationalFunction q = s.element(s.opts().expr);
    const std::string ref = s.opts().ref.empty() ? p.variables()[0] : s.opts().ref;
    const RationalFunction x = s.element(ref);
    const std::size_t budget = s.opts().budget_given ? s.opts().budget : 30;
    const auto t = w_approx(q, x, p, budget);
    Json j = s.record("wapprox");
    j["element"] = q.to_string();
    j["reference"] = x.to_string();
    j["approximants"] = trace_json(t);
    j["stabilized"] = t.stabilized ? Json(to_string(*t.stabilized)) : Json(nullptr);
    s.emit(j);
    return !t.stabilized && s.opts().strict ? exhausted : ok;
}

inline int cmd_eapprox(Session &s)
{
    const auto &p = s.bundle().program;
    const RationalFunction a = s.element(s.opts().expr);
    Json j = s.record("eapprox");
    j["element"] = a.to_string();
    const auto m = member_S(a, p, s.opts().budget);
    j["membership"] = union_json(m);
    if (!m.is_in()) {
        j["approximants"] = Json::array();
        j["stabilized"] = nullptr;
        s.emit(j);
        return s.opts().strict ? exhausted : ok;
    }
    const auto t = e_approx(a, p, s.opts().budget, s.opts().steps);
    j["approximants"] = trace_json(t);
    j["stabilized"] = t.stabilized ? Json(to_string(*t.stabilized)) : Json(nullptr);
    s.emit(j);
    return !t.stabilized && s.opts().strict ? exhausted : ok;
}

inline int cmd_composite(Session &s)
{
    const RationalFunction f = s.element(s.opts().expr);
    const auto q = quotient_for(s);
    const auto &P = *s.bundle().prime;
    const auto c = composite_value(f, P, q, s.opts().budget);
    Json j = s.record("composite");
    j["element"] = f.to_string();
    j["prime"] = P.generator_names();
    j["first"] = c.first;
    j["second"] = c.second ? Json(to_string(*c.second)) : Json(nullptr);
    s.emit(j);
    return !c.second && s.opts().strict ? exhausted : ok;
}

} // namespace cli

// Entry point shared by the binary and the tests. args excludes argv[0].
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    using namespace cli;
    CLI::App app{"Iterated local quadratic transforms: exact valuation programs and Shannon unions", "lqt"};
    app.require_subcommand(1);
    Options o;

    auto add_source = [&](CLI::App *c) {
        c->add_option("--example", o.example, "builtin example (ex3.7, ex3.7-2d, ex3.7-3d, ex5.3-shape, nonarch2d, dvr-curve)");
        c->add_option("--config", o.config, "program file");
        c->add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));
        c->add_flag("--strict", o.strict, "exit 4 when a budget or precision runs out");
    };
    auto add_budget = [&](CLI::App *c) {
        c->add_option_function<std::size_t>(
              "--budget",
              [&](const std::size_t &b) {
                  o.budget = b;
                  o.budget_given = true;
              },
              "stage budget")
            ->check(CLI::NonNegativeNumber);
    };
    auto add_expr = [&](CLI::App *c, bool required) {
        auto *opt = c->add_option("-e,--expr", o.expr, "element, e.g. \"z/(x^2*y^2)\"");
        if (required) {
            opt->required();
        }
    };

    auto *run_c = app.add_subcommand("run", "print the value vector of every stage");
    add_source(run_c);
    run_c->add_option("--steps", o.steps, "last stage to print");

    auto *member_c = app.add_subcommand("member", "membership in the Shannon union and/or the pullback");
    add_source(member_c);
    add_budget(member_c);
    add_expr(member_c, false);
    member_c->add_option("--mode", o.mode, "union, pullback or both");
    member_c->add_option("--precision", o.precision, "series precision cap");
    member_c->add_option("--corpus", o.corpus, "file with one element per line");

    auto *classify_c = app.add_subcommand("classify", "multiplicity and Shannon classification");
    add_source(classify_c);

    auto *mult_c = app.add_subcommand("multiplicity", "first n multiplicities");
    add_source(mult_c);
    mult_c->add_option("-n", o.count, "number of entries")->check(CLI::PositiveNumber);
    mult_c->add_flag("--sum", o.sum, "also print the partial sum");

    auto *value_c = app.add_subcommand("value", "value of an element");
    add_source(value_c);
    add_budget(value_c);
    add_expr(value_c, true);

    auto *w_c = app.add_subcommand("wapprox", "approximants ord_n(q)/ord_n(ref)");
    add_source(w_c);
    add_budget(w_c);
    add_expr(w_c, true);
    w_c->add_option("--ref", o.ref, "reference element (default: first variable)");

    auto *e_c = app.add_subcommand("eapprox", "orders of the transforms of aR_n");
    add_source(e_c);
    add_budget(e_c);
    add_expr(e_c, true);
    e_c->add_option("--steps", o.steps, "transform steps after membership");

    auto *comp_c = app.add_subcommand("composite", "rank 2 value along a principal prime");
    add_source(comp_c);
    add_budget(comp_c);
    add_expr(comp_c, true);
    comp_c->add_option("--precision", o.precision, "series precision cap");

    std::vector<std::string> argv_store{"lqt"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    if (e_c->parsed() && !o.budget_given) {
        o.budget = 100;
    }
    if (e_c->parsed() && e_c->count("--steps") == 0) {
        o.steps = 20;
    }

    try {
        Session s(o, out);
        if (run_c->parsed()) {
            return cmd_run(s);
        }
        if (member_c->parsed()) {
            return cmd_member(s);
        }
        if (classify_c->parsed()) {
            return cmd_classify(s);
        }
        if (mult_c->parsed()) {
            return cmd_multiplicity(s);
        }
        if (value_c->parsed()) {
            return cmd_value(s);
        }
        if (w_c->parsed()) {
            return cmd_wapprox(s);
        }
        if (e_c->parsed()) {
            return cmd_eapprox(s);
        }
        return cmd_composite(s);
    } catch (const ConfigError &e) {
        err << "error: config " << e.what() << "\n";
        return usage;
    } catch (const ParseError &e) {
        err << "error: expression: " << e.what() << "\n";
        return usage;
    } catch (const ConsistencyError &e) {
        err << "error: inconsistent program: " << e.what() << "\n";
        return inconsistent;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const BudgetExhausted &e) {
        err << "error: " << e.what() << "\n";
        return exhausted;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return internal;
    }
}

} // namespace lqt
