#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <cgr/error.hpp>
#include <cgr/forms.hpp>

#include <doctest.h>

using namespace cgr;

TEST_CASE("redundancy")
{
    auto fx = fixture::person_in_office();
    auto & g = fx.kb.facts;
    CHECK_FALSE(is_redundant(g));
    CHECK(is_redundant(disjoint_union({g, g})));
    CHECK(is_redundant(disjoint_union({g, fx.trigger})));
    CHECK_FALSE(is_redundant(fx.trigger));
}

TEST_CASE("irredundant form of a graph with a redundant copy")
{
    auto fx = fixture::person_in_office();
    auto & g = fx.kb.facts;
    auto h = disjoint_union({g, fx.trigger});
    auto core = irredundant_form(h);
    CHECK(isomorphic(core.graph, g));
    CHECK(isomorphic(irredundant_form(g).graph, g));
}

TEST_CASE("equivalence")
{
    auto fx = fixture::person_in_office();
    auto & g = fx.kb.facts;
    auto h = disjoint_union({g, fx.trigger});
    CHECK(equivalent(g, g));
    CHECK(equivalent(h, g));

    auto pair = fixture::normal_form_pair();
    CHECK_FALSE(equivalent(pair.g, pair.h));
}

TEST_CASE("isomorphism")
{
    gen::Rng rng(41);
    auto g = fixture::load("office_graph").kb.facts;
    CHECK(isomorphic(g, gen::shuffled_copy(rng, g)));
    auto other = fixture::load("office_graph").kb.facts;
    CHECK(isomorphic(g, other));

    auto s = flat_support({{"r", 2}}, {});
    auto a = parse_graph("x : Top\ny : Top\nr1 : r(x, y)\n", s);
    auto b = parse_graph("x : Top\ny : Top\nr1 : r(x, x)\n", s);
    CHECK_FALSE(isomorphic(a, b));

    CHECK_THROWS_AS(isomorphic(g, g, 3), BoundExceeded);
}

TEST_CASE("property: irredundant form")
{
    gen::Rng rng(42);
    for (int round = 0; round < 200; ++round) {
        auto s = gen::support(rng, {3, 2, 2, 2});
        auto g = gen::graph(rng, s, {6, 6, 0.3});
        auto core = irredundant_form(g);
        CHECK(equivalent(g, core.graph));
        CHECK_FALSE(is_redundant(core.graph));
        CHECK(is_projection(g, core.graph, core.folding));
        // the folding fixes the core
        for (int c = 0; c < core.graph.concept_count(); ++c) {
            auto origin = core.concept_origin[static_cast<std::size_t>(c)];
            CHECK(core.folding.concept_map[static_cast<std::size_t>(origin)] == c);
            CHECK(core.graph.concept_at(c).id == g.concept_at(origin).id);
        }
        for (int r = 0; r < core.graph.relation_count(); ++r)
            CHECK(core.folding.relation_map[static_cast<std::size_t>(core.relation_origin[static_cast<std::size_t>(r)])] == r);
        auto reverse = irredundant_form(g, RemovalOrder::reverse);
        CHECK(isomorphic(core.graph, reverse.graph));
    }
}

TEST_CASE("property: isomorphism matches brute force")
{
    gen::Rng rng(43);
    int positives = 0;
    for (int round = 0; round < 200; ++round) {
        auto s = gen::support(rng, {3, 2, 2, 2});
        auto g = gen::graph(rng, s, {5, 5, 0.3});
        auto h = gen::chance(rng, 0.5) ? gen::shuffled_copy(rng, g) : gen::graph(rng, s, {5, 5, 0.3});
        auto expected = oracle::brute_isomorphic(g, h);
        positives += expected;
        CHECK(isomorphic(g, h) == expected);
        if (expected)
            CHECK(structural_signature(g) == structural_signature(h));
    }
    CHECK(positives > 50);
}

TEST_CASE("property: equivalence is an equivalence relation")
{
    gen::Rng rng(44);
    for (int round = 0; round < 100; ++round) {
        auto s = gen::support(rng, {2, 1, 2, 1});
        std::vector<SimpleGraph> gs;
        for (int i = 0; i < 3; ++i)
            gs.push_back(gen::graph(rng, s, {3, 3, 0.3}));
        gs.push_back(disjoint_union({gs[0], gs[0]}));
        for (auto & a : gs) {
            CHECK(equivalent(a, a));
            for (auto & b : gs) {
                CHECK(equivalent(a, b) == equivalent(b, a));
                for (auto & c : gs)
                    if (equivalent(a, b) && equivalent(b, c))
                        CHECK(equivalent(a, c));
            }
        }
    }
}
