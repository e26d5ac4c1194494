#include "fixtures.hpp"
#include "generators.hpp"

#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/reasoner.hpp>
#include <cgr/rules.hpp>

#include <doctest.h>

using namespace cgr;

namespace {
auto rule_from(const SupportPtr & s, const std::string & id, const std::string & hyp, const std::string & con) -> Rule
{
    auto text = s ? print_kb(make_kb(s, SimpleGraph(s))) : std::string{};
    auto parsed = parse_kb(text + "\n[rule " + id + "]\nhyp:\n" + hyp + "con:\n" + con);
    return parsed.kb.inference.front();
}

// Rules built on the fly live on a support re-read from text; move graphs
// there through the printer so they can be combined.
auto on(const SupportPtr & s, const SimpleGraph & g) -> SimpleGraph { return parse_graph(print_graph(g), s); }

auto random_rr_kb(gen::Rng & rng, int max_rules) -> KnowledgeBase
{
    auto s = gen::support(rng, {3, 3, 3, 3});
    auto g = gen::graph(rng, s, {4, 4, 0.4, 1});
    std::vector<Rule> rules;
    int n = gen::between(rng, 1, max_rules);
    for (int i = 0; i < n; ++i)
        rules.push_back(gen::rule(rng, s, "R" + std::to_string(i), {2, 2, 3, true}));
    return make_kb(s, std::move(g), std::move(rules));
}
}

TEST_CASE("applicable projections on the corridor")
{
    auto kb = fixture::load("corridor").kb;
    auto & r1 = kb.inference[0];
    auto & r2 = kb.inference[1];
    CHECK(applicable_projections(r2, kb.facts).size() == 2);
    // adjoin specializes near
    CHECK(applicable_projections(r1, kb.facts).size() == 3);
    SimpleGraph empty(kb.support);
    CHECK(applicable_projections(r2, empty).empty());
}

TEST_CASE("applying the two-step rule adds near between the ends")
{
    auto kb = fixture::load("corridor").kb;
    auto & r2 = kb.inference[1];
    auto & g = kb.facts;
    auto o1 = *g.find_concept("o1");
    auto o3 = *g.find_concept("o3");
    for (auto & pi : applicable_projections(r2, g)) {
        if (pi.concept_map[0] != o1)
            continue;
        auto app = apply_rule(r2, g, pi);
        CHECK(app.changed);
        CHECK(app.graph.relation_count() == g.relation_count() + 1);
        auto & added = app.graph.relations().back();
        CHECK(app.graph.support().relations().name(added.type) == "near");
        CHECK(added.args == std::vector<int>{o1, o3});
    }
}

TEST_CASE("a rule restating its hypothesis changes nothing")
{
    auto kb = fixture::load("corridor").kb;
    auto copy = rule_from(kb.support, "same", "  x : Office\n  y : Office\n  xy : adjoin(x, y)\n", "  c : adjoin(x, y)\n");
    auto g = on(copy.body().graph.support_ptr(), kb.facts);
    for (auto & pi : applicable_projections(copy, g)) {
        auto app = apply_rule(copy, g, pi);
        CHECK_FALSE(app.changed);
        CHECK(twin_relations(app.graph).empty());
    }
}

TEST_CASE("the project rule creates a generic project")
{
    auto parsed = fixture::researcher_project();
    auto & kb = parsed.kb;
    auto & r3 = kb.inference.front();
    auto pis = applicable_projections(r3, kb.facts);
    REQUIRE(pis.size() == 1);
    auto app = apply_rule(r3, kb.facts, pis.front());
    CHECK(app.graph.concept_count() == 2);
    CHECK(app.graph.concept_at(1).label.is_generic());
    CHECK(app.graph.relation_count() == 1);
    CHECK(exists_projection(*parsed.query, app.graph));
}

TEST_CASE("useless applications are rejected")
{
    auto parsed = fixture::researcher_project();
    auto & r3 = parsed.kb.inference.front();
    Derivation d{parsed.kb.facts, {}, {}, false, false, 0};
    auto pi = applicable_projections(r3, d.graph).front();
    CHECK(apply_rule(r3, pi, d));
    CHECK_THROWS_AS(apply_rule(r3, pi, d), UselessApplication);
}

TEST_CASE("derivation from a single researcher stops after one step")
{
    auto parsed = fixture::researcher_project();
    auto s = parsed.kb.support;
    auto g = parse_graph("r : Researcher\n", s);
    DeriveOptions options;
    options.budget = 3;
    auto d = derive(g, parsed.kb.inference, options);
    CHECK(d.steps.size() == 1);
    CHECK(d.fixpoint);
    // every remaining application was already used
    for (auto & pi : applicable_projections(parsed.kb.inference.front(), d.graph))
        CHECK(d.used.contains(application_key(parsed.kb.inference.front(), d.graph, pi)));
}

TEST_CASE("closure of the corridor")
{
    auto kb = fixture::load("corridor").kb;
    auto d = derive(kb.facts, kb.inference);
    CHECK(d.fixpoint);
    auto h = parse_graph(R"(
o1 : Office = #1
o2 : Office = #2
o3 : Office = #3
o4 : Office = #4
a12 : adjoin(o1, o2)
a23 : adjoin(o2, o3)
a34 : adjoin(o3, o4)
n13 : near(o1, o3)
n24 : near(o2, o4)
n21 : near(o2, o1)
n32 : near(o3, o2)
n43 : near(o4, o3)
n31 : near(o3, o1)
n42 : near(o4, o2)
)", kb.support);
    CHECK(equivalent(d.graph, h));
    CHECK(equivalent(closure(kb.facts, kb.inference).graph, h));
    CHECK(twin_relations(d.graph).empty());
}

TEST_CASE("closure edge cases")
{
    auto kb = fixture::load("corridor").kb;
    auto d = derive(kb.facts, {});
    CHECK(d.steps.empty());
    CHECK(isomorphic(closure(kb.facts, {}).graph, kb.facts));

    auto succ = fixture::load("successor").kb;
    CHECK_THROWS_AS(closure(succ.facts, succ.inference), PreconditionError);
    CHECK_THROWS_AS(closure(succ.facts, succ.inference, 5), BudgetExhausted);
}

TEST_CASE("the full graph of the staffed offices satisfies the closeness constraint")
{
    auto kb = fixture::offices_with_staff().kb;
    auto & c2 = kb.constraints.front();
    CHECK_FALSE(satisfies(kb.facts, c2));
    auto full = full_graph(kb.facts, kb.inference);
    CHECK(satisfies(full, c2));
    CHECK_FALSE(is_redundant(full));

    auto g = fixture::person_in_office().kb.facts;
    CHECK(isomorphic(full_graph(g, {}), g));
}

TEST_CASE("classification")
{
    auto kb = fixture::load("corridor").kb;
    CHECK(kb.inference[0].range_restricted());
    CHECK(kb.inference[1].range_restricted());
    CHECK_FALSE(kb.inference[0].classification().disconnected);
    auto r3 = fixture::researcher_project().kb.inference.front();
    CHECK_FALSE(r3.range_restricted());

    auto apart = rule_from(fixture::researcher_project().kb.support, "apart", "  x : Researcher\n", "  p : Project\n");
    CHECK(apart.classification().disconnected);
}

TEST_CASE("decomposition of range-restricted rules")
{
    auto kb = fixture::load("corridor").kb;
    auto parts = decompose_rr(kb.inference[0]);
    REQUIRE(parts.size() == 1);
    CHECK(parts.front().body().graph.relation_count() == 2);

    auto three = rule_from(kb.support, "three", "  x : Office = #1\n",
        "  a : Office = #2\n  b : Office = #3\n  n : near(a, b)\n");
    CHECK(decompose_rr(three).size() == 3);

    auto r3 = fixture::researcher_project().kb.inference.front();
    CHECK_THROWS_AS(decompose_rr(r3), PreconditionError);
}

TEST_CASE("property: decomposed rules deduce the same goals")
{
    gen::Rng rng(51);
    for (int round = 0; round < 100; ++round) {
        auto kb = random_rr_kb(rng, 3);
        std::vector<Rule> parts;
        for (auto & r : kb.inference)
            for (auto & p : decompose_rr(r))
                parts.push_back(p);
        auto split = make_kb(kb.support, kb.facts, parts);
        auto q = gen::graph(rng, kb.support, {3, 3, 0.5});
        CHECK(sr_deduce(q, kb).outcome == sr_deduce(q, split).outcome);
        CHECK(equivalent(derive(kb.facts, kb.inference).graph, derive(kb.facts, parts).graph));
    }
}

TEST_CASE("property: derivations only add")
{
    gen::Rng rng(52);
    for (int round = 0; round < 100; ++round) {
        auto s = gen::support(rng, {3, 3, 2, 2});
        auto g = normal_form(gen::graph(rng, s, {4, 4, 0.3, 1}));
        if (! twin_relations(g).empty())
            continue;
        std::vector<Rule> rules{gen::rule(rng, s, "A"), gen::rule(rng, s, "B")};
        DeriveOptions options;
        options.budget = 6;
        auto d = derive(g, rules, options);
        SimpleGraph replayed;
        CHECK(replay(g, {&rules[0], &rules[1]}, d.steps, &replayed).empty());
        CHECK(exists_projection(g, d.graph));
        CHECK(twin_relations(d.graph).empty());
        CHECK(isomorphic(replayed, d.graph));
    }
}

TEST_CASE("property: closures are unique, bounded and full")
{
    gen::Rng rng(53);
    for (int round = 0; round < 100; ++round) {
        auto kb = random_rr_kb(rng, 4);
        DeriveOptions depth;
        depth.strategy = Strategy::depth;
        auto a = derive(kb.facts, kb.inference);
        auto b = derive(kb.facts, kb.inference, depth);
        CHECK(a.fixpoint);
        CHECK(b.fixpoint);
        CHECK(isomorphic(a.graph, b.graph));
        // applications never add twins; the facts may bring their own
        CHECK(twin_relations(a.graph).size() == twin_relations(kb.facts).size());
        auto bounds = closure_bounds(kb.facts, kb.inference);
        CHECK(a.steps.size() <= bounds.L);
        CHECK(b.steps.size() <= bounds.L);

        auto full = full_graph(kb.facts, kb.inference);
        for (auto & r : kb.inference)
            for (auto & pi : applicable_projections(r, full))
                CHECK(equivalent(apply_rule(r, full, pi).graph, full));
    }
}
