#include "oracles.hpp"

#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/reasoner.hpp>
#include <cgr/reductions.hpp>

#include <doctest.h>

#include "generators.hpp"

using namespace cgr;

namespace {
// (a | b | !c) & (!a | c | !d)
auto two_clauses(std::vector<int> block = {}) -> CnfFormula
{
    return {{"a", "b", "c", "d"}, {{{0, true}, {1, true}, {2, false}}, {{0, false}, {2, true}, {3, false}}}, std::move(block)};
}

auto count_type(const SimpleGraph & g, const std::string & name) -> int
{
    int n = 0;
    for (auto & r : g.relations())
        n += g.support().relations().name(r.type) == name;
    return n;
}

auto outcome_of(const DeductionInstance & inst, Model m, Budget b = {}) -> Outcome
{
    return ask(m, inst.goal, inst.kb, b).outcome;
}

// Two controllable variables over {1,2,3}, two uncontrollable over {a,b}.
auto small_mixed() -> MixedCsp
{
    MixedCsp p;
    p.variables = {{"x1", {"1", "2", "3"}, false}, {"x2", {"1", "2", "3"}, false}, {"l1", {"a", "b"}, true},
        {"l2", {"a", "b"}, true}};
    p.constraints = {
        {"C1", {2, 3}, {{0, 0}, {0, 1}, {1, 0}}},
        {"C2", {0, 2}, {{0, 0}, {1, 1}, {2, 0}}},
        {"C3", {1, 3}, {{2, 0}, {0, 1}, {1, 1}}},
    };
    return p;
}
}

TEST_CASE("cnf validation")
{
    CnfFormula twice{{"a"}, {{{0, true}, {0, false}}}, {}};
    CHECK_THROWS_AS(validate(twice), ValidationError);
    CnfFormula wide{{"a", "b", "c", "d"}, {{{0, true}, {1, true}, {2, true}, {3, true}}}, {}};
    CHECK_THROWS_AS(validate(wide), ValidationError);
    CHECK_THROWS_AS(validate(two_clauses(), 2), ValidationError);
    CHECK_NOTHROW(validate(two_clauses({0, 0, 1, 1}), 2));
}

TEST_CASE("satisfiability to projection")
{
    auto inst = gen_sat3_projection(two_clauses());
    CHECK(count_type(inst.target, "C1") == 7);
    CHECK(count_type(inst.target, "C2") == 7);
    CHECK(count_type(inst.target, "val") == 8);
    CHECK(inst.query.concept_count() == 8);
    CHECK(exists_projection(inst.query, inst.target));

    CnfFormula unit{{"x"}, {{{0, true}}}, {}};
    auto u = gen_sat3_projection(unit);
    CHECK(count_type(u.target, "C1") == 1);

    CnfFormula contradiction{{"x"}, {{{0, true}}, {{0, false}}}, {}};
    auto c = gen_sat3_projection(contradiction);
    CHECK_FALSE(exists_projection(c.query, c.target));
}

TEST_CASE("property: projection decides satisfiability")
{
    std::mt19937_64 rng(91);
    for (int round = 0; round < 200; ++round) {
        auto f = random_cnf(rng, std::uniform_int_distribution<int>(1, 8)(rng), std::uniform_int_distribution<int>(1, 12)(rng));
        auto inst = gen_sat3_projection(f);
        for (std::size_t i = 0; i < f.clauses.size(); ++i)
            CHECK(count_type(inst.target, "C" + std::to_string(i + 1)) == (1 << f.clauses[i].size()) - 1);
        CHECK(exists_projection(inst.query, inst.target) == oracle::satisfiable(f));
    }
}

TEST_CASE("forall-exists to consistency")
{
    auto inst = gen_sat3_2c_sgc(two_clauses({0, 0, 1, 1}));
    CHECK_FALSE(is_redundant(inst.target));
    auto kb = make_kb(inst.target.support_ptr(), inst.target, {}, {}, {inst.constraint});
    CHECK((sgc_consistent(kb).outcome == Outcome::proved) == oracle::forall_exists(two_clauses({0, 0, 1, 1})));

    auto all_exists = gen_sat3_2c_sgc(two_clauses({1, 1, 1, 1}));
    CHECK(all_exists.constraint.trigger().empty());
}

TEST_CASE("property: consistency decides forall-exists")
{
    std::mt19937_64 rng(92);
    int consistent = 0;
    for (int round = 0; round < 100; ++round) {
        auto f = random_cnf(rng, std::uniform_int_distribution<int>(2, 6)(rng), std::uniform_int_distribution<int>(1, 5)(rng), 2);
        auto inst = gen_sat3_2c_sgc(f);
        CHECK_FALSE(is_redundant(inst.target));
        auto expected = oracle::forall_exists(f);
        consistent += expected;
        CHECK(satisfies(inst.target, inst.constraint) == expected);
    }
    CHECK(consistent > 5);
    CHECK(consistent < 95);
}

TEST_CASE("exists-forall-exists to world search")
{
    auto f = two_clauses({0, 0, 1, 2});
    auto inst = gen_sat3_3_sec(f);
    CHECK(count_type(inst.kb.facts, "val") == 4);
    CHECK((outcome_of(inst, Model::sec) == Outcome::proved) == oracle::exists_forall_exists(f));

    // no first-block variables: the root world alone decides
    auto g = two_clauses({1, 1, 2, 2});
    auto degenerate = gen_sat3_3_sec(g);
    CHECK(degenerate.goal.empty());
    CHECK((outcome_of(degenerate, Model::sec) == Outcome::proved) == oracle::forall_exists(CnfFormula{g.names, g.clauses, {0, 0, 1, 1}}));
}

TEST_CASE("property: world search decides exists-forall-exists")
{
    std::mt19937_64 rng(93);
    for (int round = 0; round < 30; ++round) {
        auto f = random_cnf(rng, std::uniform_int_distribution<int>(3, 6)(rng), std::uniform_int_distribution<int>(1, 4)(rng), 3);
        auto inst = gen_sat3_3_sec(f);
        auto v = ask(Model::sec, inst.goal, inst.kb);
        CHECK(v.outcome != Outcome::unknown);
        CHECK((v.outcome == Outcome::proved) == oracle::exists_forall_exists(f));
    }
}

TEST_CASE("word problems")
{
    SemiThueSystem same{{{"a", "b"}}, "ab", "ab"};
    auto fixed = gen_word_problem_sr(same);
    auto v = ask(Model::sr, fixed.goal, fixed.kb);
    CHECK(v.outcome == Outcome::proved);
    CHECK(v.certificate->derivation.empty());

    SemiThueSystem one{{{"a", "c"}}, "ab", "cb"};
    auto inst = gen_word_problem_sr(one);
    auto w = ask(Model::sr, inst.goal, inst.kb);
    CHECK(w.outcome == Outcome::proved);
    CHECK(w.certificate->derivation.size() == 1);
    CHECK(verify(w, Model::sr, inst.goal, inst.kb) == "");

    SemiThueSystem never{{{"a", "b"}}, "b", "a"};
    auto n = gen_word_problem_sr(never);
    CHECK(outcome_of(n, Model::sr) == Outcome::refuted);
}

TEST_CASE("property: rewriting agrees with the bounded oracle")
{
    std::mt19937_64 rng(94);
    int proved = 0;
    for (int round = 0; round < 100; ++round) {
        auto s = random_semi_thue(rng, 2, 2, 3);
        auto expected = oracle::rewrites_to(s, 200);
        auto inst = gen_word_problem_sr(s);
        auto got = outcome_of(inst, Model::sr, {60, 60, 60});
        if (got == Outcome::proved) {
            ++proved;
            CHECK(expected != std::optional<bool>(false));
        }
        if (got == Outcome::refuted)
            CHECK(expected == std::optional<bool>(false));
        if (expected == std::optional<bool>(false))
            CHECK(got != Outcome::proved);
    }
    CHECK(proved > 5);
}

TEST_CASE("consistency to world search")
{
    auto inst = gen_sat3_2c_sgc(two_clauses({0, 0, 1, 1}));
    auto sec = gen_sgc_to_sec(inst.target, inst.constraint);
    CHECK(sec.kb.evolution.size() == 1);
    CHECK(sec.kb.constraints.front().polarity() == Polarity::negative);
    bool violated = ! satisfies(inst.target, inst.constraint);
    CHECK((outcome_of(sec, Model::sec) == Outcome::proved) == violated);

    // a constraint with an empty trigger has no frontier
    auto closed = gen_sat3_2c_sgc(two_clauses({1, 1, 1, 1}));
    CHECK_THROWS_AS(gen_sgc_to_sec(closed.target, closed.constraint), PreconditionError);
}

TEST_CASE("property: world search answers consistency")
{
    gen::Rng rng(98);
    int ran = 0;
    for (int round = 0; ran < 50 && round < 500; ++round) {
        auto s = gen::support(rng);
        auto g = gen::graph(rng, s, {4, 4, 0.3, 1});
        auto c = gen::constraint(rng, s, "C", Polarity::positive);
        std::optional<DeductionInstance> inst;
        try {
            inst = gen_sgc_to_sec(g, c);
        }
        catch (const PreconditionError &) {
            continue;
        }
        ++ran;
        auto kb = make_kb(s, g, {}, {}, {c});
        auto sec = outcome_of(*inst, Model::sec, Budget::unbounded());
        CHECK((sec == Outcome::proved) == (sgc_consistent(kb).outcome == Outcome::refuted));
    }
    CHECK(ran == 50);
}

TEST_CASE("csp to projection")
{
    MixedCsp one;
    one.variables = {{"x", {"1", "2"}, false}};
    auto a = csp_to_projection(one);
    CHECK(enumerate_projections(a.query, a.target).projections.size() == 2);

    MixedCsp triangle;
    for (auto n : {"p", "q", "r"})
        triangle.variables.push_back({n, {"red", "green"}, false});
    std::vector<std::vector<int>> differ{{0, 1}, {1, 0}};
    triangle.constraints = {{"pq", {0, 1}, differ}, {"qr", {1, 2}, differ}, {"pr", {0, 2}, differ}};
    CHECK_FALSE(oracle::csp_satisfiable(triangle));
    auto t = csp_to_projection(triangle);
    CHECK_FALSE(exists_projection(t.query, t.target));

    triangle.variables[0].uncontrollable = true;
    CHECK_THROWS_AS(csp_to_projection(triangle), PreconditionError);
}

TEST_CASE("property: projection decides csp satisfiability")
{
    std::mt19937_64 rng(95);
    int sat = 0;
    for (int round = 0; round < 200; ++round) {
        auto p = random_csp(rng, std::uniform_int_distribution<int>(1, 5)(rng), 3, std::uniform_int_distribution<int>(0, 6)(rng));
        auto inst = csp_to_projection(p);
        auto expected = oracle::csp_satisfiable(p);
        sat += expected;
        CHECK(exists_projection(inst.query, inst.target) == expected);
    }
    CHECK(sat > 10);
    CHECK(sat < 190);
}

TEST_CASE("mixed networks to consistency")
{
    auto p = small_mixed();
    auto inst = mixed_to_sgc(p);
    CHECK(inst.constraint.trigger().concept_count() == 2);
    CHECK(inst.constraint.trigger().relation_count() == 1);
    CHECK(satisfies(inst.target, inst.constraint) == oracle::mixed_consistent(p));

    for (auto & v : p.variables)
        v.uncontrollable = false;
    auto plain = mixed_to_sgc(p);
    CHECK(plain.constraint.trigger().empty());
    CHECK(satisfies(plain.target, plain.constraint) == oracle::csp_satisfiable(p));
}

TEST_CASE("property: consistency decides mixed networks")
{
    std::mt19937_64 rng(96);
    int consistent = 0;
    for (int round = 0; round < 100; ++round) {
        auto n = std::uniform_int_distribution<int>(2, 4)(rng);
        auto p = random_csp(rng, n, 3, std::uniform_int_distribution<int>(1, 5)(rng), std::uniform_int_distribution<int>(1, n - 1)(rng));
        auto inst = mixed_to_sgc(p);
        auto expected = oracle::mixed_consistent(p);
        consistent += expected;
        CHECK(satisfies(inst.target, inst.constraint) == expected);
    }
    CHECK(consistent > 5);
    CHECK(consistent < 95);
}

TEST_CASE("generated instances validate")
{
    std::mt19937_64 rng(97);
    for (int round = 0; round < 20; ++round) {
        auto f = random_cnf(rng, 4, 4, 3);
        auto inst = gen_sat3_3_sec(f);
        CHECK_NOTHROW(validate_graph(to_raw(inst.kb.facts), inst.kb.support));
        CHECK_NOTHROW(validate_graph(to_raw(inst.goal), inst.kb.support));
        auto p = random_csp(rng, 3, 3, 3, 1);
        auto m = mixed_to_sgc(p);
        CHECK_NOTHROW(validate_graph(to_raw(m.target), m.target.support_ptr()));
    }
}
