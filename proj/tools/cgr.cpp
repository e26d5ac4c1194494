// Command-line front end: one command per process.
//
// Exit codes: 0 Proved, 1 Refuted, 2 Unknown for verdict commands; 0 for
// success otherwise; 3 unreadable or invalid input; 4 a precondition such as
// an unbounded budget over rules that may not terminate; 5 any other error.

#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/kb_io.hpp>
#include <cgr/logic.hpp>
#include <cgr/reductions.hpp>

#include "oracles.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace cgr;
using json = nlohmann::ordered_json;

/// A file that cannot be read.
class InputError : public Error {
public:
    using Error::Error;
};

auto read_file(const std::string & path) -> std::string
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto exit_code(Outcome o) -> int
{
    switch (o) {
    case Outcome::proved: return 0;
    case Outcome::refuted: return 1;
    case Outcome::unknown: return 2;
    }
    return 2;
}

struct Options {
    std::string kb;
    std::string query;
    std::string model = "sg";
    long budget = -1;
    long max_worlds = -1;
    bool deterministic = false;
    bool verify = false;

    std::string kind;
    std::uint64_t seed = 1;
    int vars = 4;
    int clauses = 4;
    int domain = 3;
    int constraints = 4;
    int uncontrollable = 2;
    int alphabet = 2;
    int rules = 2;
    int length = 3;
    std::string out;
    std::string oracle;
};

auto budget_of(const Options & o) -> Budget
{
    Budget b;
    if (o.budget >= 0) {
        auto n = static_cast<std::size_t>(o.budget);
        b = {n, n, n};
    }
    if (o.max_worlds >= 0)
        b.max_worlds = static_cast<std::size_t>(o.max_worlds);
    return b;
}

auto emit(Verdict v, const std::optional<std::string> & check_failure) -> int
{
    if (check_failure && ! check_failure->empty())
        v.diagnostics.push_back("certificate check failed: " + *check_failure);
    else if (check_failure && v.certificate)
        v.diagnostics.emplace_back("certificate verified");
    else if (check_failure)
        v.diagnostics.emplace_back("no certificate to verify");
    std::cout << verdict_to_json(v) << "\n";
    return exit_code(v.outcome);
}

auto run_check(const Options & o) -> int
{
    auto parsed = parse_kb(read_file(o.kb));
    auto budget = budget_of(o);
    auto v = check_consistency(parsed.kb, budget);
    std::optional<std::string> checked;
    if (o.verify)
        checked = verify(v, parsed.kb.inference.empty() ? Model::sgc : Model::src, std::nullopt, parsed.kb, budget);
    return emit(std::move(v), checked);
}

auto run_ask(const Options & o) -> int
{
    auto parsed = parse_kb(read_file(o.kb));
    auto model = parse_model(o.model);
    auto query = parsed.query;
    if (! o.query.empty())
        query = parse_graph(read_file(o.query), parsed.kb.support);
    auto budget = budget_of(o);
    auto v = ask(model, query, parsed.kb, budget);
    std::optional<std::string> checked;
    if (o.verify)
        checked = verify(v, model, query, parsed.kb, budget);
    return emit(std::move(v), checked);
}

auto run_closure(const Options & o) -> int
{
    auto parsed = parse_kb(read_file(o.kb));
    std::optional<std::size_t> budget;
    if (o.budget > 0)
        budget = static_cast<std::size_t>(o.budget);
    auto d = closure(parsed.kb.facts, parsed.kb.inference, budget);
    std::cout << print_graph(d.graph);
    return 0;
}

auto run_export_fol(const Options & o) -> int
{
    auto parsed = parse_kb(read_file(o.kb));
    auto & kb = parsed.kb;
    for (auto & f : phi_support(*kb.support))
        std::cout << "support: " << to_text(f) << "\n";
    std::cout << "fact: " << to_text(phi_graph(kb.facts)) << "\n";
    for (auto & r : kb.inference)
        std::cout << "rule " << r.id() << ": " << to_text(phi_rule(r.body())) << "\n";
    for (auto & r : kb.evolution)
        std::cout << "evolution " << r.id() << ": " << to_text(phi_rule(r.body())) << "\n";
    if (parsed.query)
        std::cout << "query: " << to_text(phi_graph(*parsed.query)) << "\n";
    return 0;
}

auto expected(bool proved) -> std::string { return proved ? "Proved" : "Refuted"; }

auto run_gen(const Options & o) -> int
{
    std::mt19937_64 rng(o.seed);
    std::string text;
    json side{{"kind", o.kind}, {"seed", o.seed}};

    if (o.kind == "sat3") {
        auto f = random_cnf(rng, o.vars, o.clauses);
        auto inst = gen_sat3_projection(f);
        text = print_kb(make_kb(inst.target.support_ptr(), inst.target), inst.query);
        side["model"] = "sg";
        side["expected"] = expected(oracle::satisfiable(f));
    }
    else if (o.kind == "sat3-2c") {
        auto f = random_cnf(rng, o.vars, o.clauses, 2);
        auto inst = gen_sat3_2c_sgc(f);
        text = print_kb(make_kb(inst.target.support_ptr(), inst.target, {}, {}, {inst.constraint}));
        side["model"] = "sgc";
        side["expected"] = expected(oracle::forall_exists(f));
    }
    else if (o.kind == "sat3-3") {
        auto f = random_cnf(rng, o.vars, o.clauses, 3);
        auto inst = gen_sat3_3_sec(f);
        text = print_kb(inst.kb, inst.goal);
        side["model"] = "sec";
        side["expected"] = expected(oracle::exists_forall_exists(f));
    }
    else if (o.kind == "word") {
        auto s = random_semi_thue(rng, o.alphabet, o.rules, o.length);
        auto inst = gen_word_problem_sr(s);
        text = print_kb(inst.kb, inst.goal);
        side["model"] = "sr";
        auto reach = oracle::rewrites_to(s, 10000);
        side["expected"] = reach ? json(expected(*reach)) : json(nullptr);
    }
    else if (o.kind == "csp" || o.kind == "mixed") {
        bool mixed = o.kind == "mixed";
        auto p = random_csp(rng, o.vars, o.domain, o.constraints, mixed ? o.uncontrollable : 0);
        if (mixed) {
            auto inst = mixed_to_sgc(p);
            text = print_kb(make_kb(inst.target.support_ptr(), inst.target, {}, {}, {inst.constraint}));
            side["model"] = "sgc";
            side["expected"] = expected(oracle::mixed_consistent(p));
        }
        else {
            auto inst = csp_to_projection(p);
            text = print_kb(make_kb(inst.target.support_ptr(), inst.target), inst.query);
            side["model"] = "sg";
            side["expected"] = expected(oracle::csp_satisfiable(p));
        }
    }
    else if (o.kind == "sgc2sec") {
        if (o.kb.empty())
            throw PreconditionError("gen sgc2sec needs --kb with facts and a positive constraint");
        auto parsed = parse_kb(read_file(o.kb));
        auto c = std::find_if(parsed.kb.constraints.begin(), parsed.kb.constraints.end(),
            [](auto & x) { return x.polarity() == Polarity::positive; });
        if (c == parsed.kb.constraints.end())
            throw PreconditionError("the KB has no positive constraint");
        auto inst = gen_sgc_to_sec(parsed.kb.facts, *c);
        text = print_kb(inst.kb, inst.goal);
        side["model"] = "sec";
        // the source question, answered by the SGC check on the input
        KnowledgeBase source{parsed.kb.support, parsed.kb.facts, {}, {}, {*c}};
        side["expected"] = sgc_consistent(source).outcome == Outcome::refuted ? "Proved" : "Refuted";
    }
    else
        throw PreconditionError("unknown generator '" + o.kind + "'");

    if (o.out.empty())
        std::cout << text;
    else
        std::ofstream(o.out) << text;
    if (! o.oracle.empty())
        std::ofstream(o.oracle) << side.dump(2) << "\n";
    return 0;
}

} // namespace

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"Conceptual graph reasoning engine"};
    app.require_subcommand(1);
    Options o;

    auto add_budget = [&](CLI::App * sub) {
        sub->add_option("--budget", o.budget, "Rule applications, worlds and restorability depth; 0 means unbounded");
    };

    auto * check = app.add_subcommand("check", "Consistency of a KB (SRC with inference rules, SGC otherwise)");
    check->add_option("--kb", o.kb, "KB file")->required();
    add_budget(check);
    check->add_flag("--deterministic", o.deterministic, "Single-threaded search");
    check->add_flag("--verify", o.verify, "Re-check the certificate");

    auto * ask = app.add_subcommand("ask", "Deduction (or consistency without a query) under a model");
    ask->add_option("--kb", o.kb, "KB file")->required();
    ask->add_option("--query", o.query, "Query file; defaults to the KB's [query] section");
    ask->add_option("--model", o.model, "sg | sr | sgc | src | sec | srec")
        ->check(CLI::IsMember({"sg", "sr", "sgc", "src", "sec", "srec"}));
    add_budget(ask);
    ask->add_option("--max-worlds", o.max_worlds, "World limit for sec and srec; 0 means unbounded");
    ask->add_flag("--deterministic", o.deterministic, "Single-threaded search");
    ask->add_flag("--verify", o.verify, "Re-check the certificate");

    auto * clos = app.add_subcommand("closure", "Saturate the facts with the inference rules");
    clos->add_option("--kb", o.kb, "KB file")->required();
    add_budget(clos);

    auto * normalize = app.add_subcommand("normalize", "Print the normal form of the facts");
    normalize->add_option("--kb", o.kb, "KB file")->required();
    auto * core = app.add_subcommand("core", "Print the irredundant form of the facts");
    core->add_option("--kb", o.kb, "KB file")->required();
    auto * fol = app.add_subcommand("export-fol", "Print the logical translation");
    fol->add_option("--kb", o.kb, "KB file")->required();

    auto * gen = app.add_subcommand("gen", "Generate a random reduction instance");
    gen->add_option("kind", o.kind, "sat3 | sat3-2c | sat3-3 | word | csp | mixed | sgc2sec")
        ->required()
        ->check(CLI::IsMember({"sat3", "sat3-2c", "sat3-3", "word", "csp", "mixed", "sgc2sec"}));
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_option("--vars", o.vars, "Variables (CNF and CSP)");
    gen->add_option("--clauses", o.clauses, "Clauses");
    gen->add_option("--domain", o.domain, "Maximum domain size");
    gen->add_option("--constraints", o.constraints, "CSP constraints");
    gen->add_option("--uncontrollable", o.uncontrollable, "Uncontrollable variables (mixed)");
    gen->add_option("--alphabet", o.alphabet, "Alphabet size (word)");
    gen->add_option("--rules", o.rules, "Rewrite rules (word)");
    gen->add_option("--length", o.length, "Maximum word length (word)");
    gen->add_option("--kb", o.kb, "Input KB (sgc2sec)");
    gen->add_option("--out", o.out, "Write the KB here instead of stdout");
    gen->add_option("--oracle", o.oracle, "Write the expected verdict as JSON here");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    if (o.deterministic)
        omp_set_num_threads(1);

    try {
        if (*check)
            return run_check(o);
        if (*ask)
            return run_ask(o);
        if (*clos)
            return run_closure(o);
        if (*normalize) {
            std::cout << print_graph(parse_kb(read_file(o.kb)).kb.facts);
            return 0;
        }
        if (*core) {
            std::cout << print_graph(irredundant_form(parse_kb(read_file(o.kb)).kb.facts).graph);
            return 0;
        }
        if (*fol)
            return run_export_fol(o);
        return run_gen(o);
    }
    catch (const ParseError & e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    }
    catch (const InputError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    catch (const ValidationError & e) {
        for (auto & d : e.diagnostics())
            std::cerr << "invalid: " << d << "\n";
        return 3;
    }
    catch (const PreconditionError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
