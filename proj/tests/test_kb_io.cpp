#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/kb_io.hpp>

#include <doctest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "generators.hpp"

using namespace cgr;
using json = nlohmann::json;

namespace {
auto random_kb(gen::Rng & rng) -> KnowledgeBase
{
    auto s = gen::support(rng, {4, 3, 3, 3});
    auto g = gen::graph(rng, s);
    std::vector<Rule> inference;
    std::vector<Rule> evolution;
    std::vector<Constraint> constraints;
    for (int i = 0, n = gen::between(rng, 0, 3); i < n; ++i)
        inference.push_back(gen::rule(rng, s, "R" + std::to_string(i)));
    for (int i = 0, n = gen::between(rng, 0, 2); i < n; ++i)
        evolution.push_back(gen::rule(rng, s, "E" + std::to_string(i)));
    for (int i = 0, n = gen::between(rng, 0, 2); i < n; ++i)
        constraints.push_back(gen::constraint(rng, s, "C" + std::to_string(i),
            gen::chance(rng, 0.5) ? Polarity::positive : Polarity::negative));
    return make_kb(s, g, inference, evolution, constraints);
}

auto parse_position(const std::string & text) -> std::pair<std::size_t, std::size_t>
{
    try {
        parse_kb(text);
    }
    catch (const ParseError & e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}
}

TEST_CASE("shipped office graph")
{
    auto parsed = fixture::load("office_graph");
    CHECK(parsed.kb.facts.concept_count() == 5);
    CHECK(parsed.kb.constraints.size() == 1);
    CHECK(parsed.query.has_value());
}

TEST_CASE("syntax errors carry a position")
{
    auto [line, column] = parse_position("[support]\nconcept A\nrelation r/x\n");
    CHECK(line == 3);
    CHECK(column > 1);

    auto [l2, c2] = parse_position("[support]\nconcept A\n[fact F]\na A\n");
    CHECK(l2 == 4);
    CHECK(c2 >= 1);

    CHECK_THROWS_AS(parse_kb("[bogus]\n"), ParseError);
}

TEST_CASE("semantic errors list every diagnostic")
{
    try {
        parse_kb("[support]\nconcept A\n[fact F]\nx : B\ny : C\n");
        FAIL("expected a validation error");
    }
    catch (const ValidationError & e) {
        CHECK(e.diagnostics().size() >= 2);
    }
}

TEST_CASE("empty fact section")
{
    auto parsed = parse_kb("[support]\nconcept A\n[fact F]\n");
    CHECK(parsed.kb.facts.empty());
    CHECK_FALSE(parsed.query.has_value());
}

TEST_CASE("comments and blank lines are ignored")
{
    auto parsed = parse_kb("# note\n[support]\n\nconcept A # trailing\n[fact F]\n  x : A\n");
    CHECK(parsed.kb.facts.concept_count() == 1);
}

TEST_CASE("shipped files print canonically")
{
    for (auto name : {"office_graph", "corridor", "successor", "office_assignment"}) {
        auto parsed = fixture::load(name);
        auto text = print_kb(parsed.kb, parsed.query);
        auto again = parse_kb(text);
        CHECK(print_kb(again.kb, again.query) == text);
        CHECK(isomorphic(again.kb.facts, parsed.kb.facts));
    }
}

TEST_CASE("property: print and parse round trip")
{
    gen::Rng rng(101);
    for (int round = 0; round < 200; ++round) {
        auto kb = random_kb(rng);
        auto text = print_kb(kb);
        auto back = parse_kb(text);
        CHECK(print_kb(back.kb) == text);
        CHECK(isomorphic(back.kb.facts, kb.facts));
        REQUIRE(back.kb.inference.size() == kb.inference.size());
        REQUIRE(back.kb.evolution.size() == kb.evolution.size());
        REQUIRE(back.kb.constraints.size() == kb.constraints.size());
        for (std::size_t i = 0; i < kb.constraints.size(); ++i) {
            CHECK(back.kb.constraints[i].id() == kb.constraints[i].id());
            CHECK(back.kb.constraints[i].polarity() == kb.constraints[i].polarity());
        }
        for (std::size_t i = 0; i < kb.inference.size(); ++i)
            CHECK(back.kb.inference[i].classification().range_restricted
                == kb.inference[i].classification().range_restricted);
    }
}

TEST_CASE("proved verdict carries the projection")
{
    auto parsed = fixture::load("office_graph");
    auto v = sg_deduce(*parsed.query, parsed.kb);
    auto doc = json::parse(verdict_to_json(v));
    CHECK(doc["schema"] == 1);
    CHECK(doc["outcome"] == "Proved");
    REQUIRE(doc["certificate"]["projections"].size() == 1);
    auto map = doc["certificate"]["projections"][0];
    CHECK(map["r"] == "k");
    CHECK(map.size() == static_cast<std::size_t>(parsed.query->node_count()));
}

TEST_CASE("unknown verdict has a null certificate")
{
    Verdict v;
    v.budget_spent = 7;
    auto doc = json::parse(verdict_to_json(v));
    CHECK(doc["outcome"] == "Unknown");
    CHECK(doc["certificate"].is_null());
    CHECK(doc["budget_spent"] == 7);
    auto back = verdict_from_json(verdict_to_json(v));
    CHECK(back.outcome == Outcome::unknown);
    CHECK_FALSE(back.certificate.has_value());
}

TEST_CASE("property: certificates survive serialization and replay")
{
    gen::Rng rng(102);
    int replayed = 0;
    for (int round = 0; round < 100; ++round) {
        auto kb = random_kb(rng);
        kb.evolution.clear();
        auto q = gen::graph(rng, kb.support, {3, 3, 0.3, 1});
        auto model = std::array{Model::sg, Model::sr, Model::sgc, Model::src}[round % 4];
        Budget b{30, 30, 30};
        auto v = ask(model, q, kb, b);
        auto back = verdict_from_json(verdict_to_json(v));
        CHECK(back.outcome == v.outcome);
        CHECK(back.budget_spent == v.budget_spent);
        CHECK(verdict_to_json(back) == verdict_to_json(v));
        if (back.outcome != Outcome::unknown) {
            CHECK(verify(back, model, q, kb, b) == "");
            ++replayed;
        }
    }
    CHECK(replayed > 50);
}
