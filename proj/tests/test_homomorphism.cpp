#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <cgr/error.hpp>
#include <cgr/graph.hpp>
#include <cgr/homomorphism.hpp>

#include <doctest.h>

#include <set>

using namespace cgr;

TEST_CASE("the office query has exactly one projection")
{
    auto parsed = fixture::load("office_graph");
    auto & g = parsed.kb.facts;
    auto & q = *parsed.query;
    CHECK(exists_projection(q, g));
    auto all = enumerate_projections(q, g);
    CHECK(all.projections.size() == 1);
    CHECK_FALSE(all.truncated);
    CHECK(oracle::brute_force_projections(q, g).size() == 1);
}

TEST_CASE("identity and empty query")
{
    auto g = fixture::load("office_graph").kb.facts;
    CHECK(exists_projection(g, g));
    CHECK(is_projection(g, g, identity_projection(g)));
    SimpleGraph empty(g.support_ptr());
    CHECK(enumerate_projections(empty, g).projections.size() == 1);
}

TEST_CASE("projection needs the normal form")
{
    auto pair = fixture::normal_form_pair();
    CHECK_FALSE(exists_projection(pair.g, pair.h));
    CHECK(exists_projection(pair.g, normal_form(pair.h)));
}

TEST_CASE("the two-step rule hypothesis matches twice on the corridor")
{
    auto kb = fixture::load("corridor").kb;
    auto & r2 = kb.inference[1];
    CHECK(enumerate_projections(r2.hypothesis(), kb.facts).projections.size() == 2);
}

TEST_CASE("a single top node projects onto every node")
{
    auto s = flat_support({{"r", 2}}, {"a"});
    auto g = parse_graph("x : Top\ny : Top = a\nz : Top\nr1 : r(x, y)\n", s);
    auto q = parse_graph("t : Top\n", s);
    CHECK(oracle::brute_force_projections(q, g).size() == 3);
    CHECK(enumerate_projections(q, g).projections.size() == 3);
}

TEST_CASE("enumeration truncates at the limit")
{
    auto s = flat_support({}, {});
    auto g = parse_graph("a : Top\nb : Top\nc : Top\n", s);
    auto q = parse_graph("x : Top\ny : Top\n", s);
    auto some = enumerate_projections(q, g, {4, false});
    CHECK(some.projections.size() == 4);
    CHECK(some.truncated);
}

TEST_CASE("support mismatch is an error")
{
    auto a = fixture::load("corridor").kb.facts;
    auto b = fixture::load("office_graph").kb.facts;
    CHECK_THROWS_AS(exists_projection(a, b), SupportMismatch);
}

TEST_CASE("negative constraint body extends a trigger projection")
{
    auto kb = fixture::load("office_graph").kb;
    auto & c = kb.constraints.front();
    auto & body = c.body();
    NodeSet domain = NodeSet::none(body.graph);
    for (int x = 0; x < body.graph.concept_count(); ++x)
        domain.concepts[static_cast<std::size_t>(x)] = body.concept_colored(x, 0);
    for (int x = 0; x < body.graph.relation_count(); ++x)
        domain.relations[static_cast<std::size_t>(x)] = body.relation_colored(x, 0);

    bool extended = false;
    for (auto & pi : enumerate_projections(c.trigger(), kb.facts).projections) {
        Projection partial{std::vector<int>(static_cast<std::size_t>(body.graph.concept_count()), -1),
            std::vector<int>(static_cast<std::size_t>(body.graph.relation_count()), -1)};
        for (std::size_t i = 0; i < pi.concept_map.size(); ++i)
            partial.concept_map[static_cast<std::size_t>(c.trigger_concept_origin()[i])] = pi.concept_map[i];
        for (std::size_t i = 0; i < pi.relation_map.size(); ++i)
            partial.relation_map[static_cast<std::size_t>(c.trigger_relation_origin()[i])] = pi.relation_map[i];
        auto ext = extend_projection(body.graph, domain, partial, kb.facts);
        for (auto & full : ext.projections) {
            CHECK(is_projection(body.graph, kb.facts, full));
            extended = true;
        }
    }
    CHECK(extended);
}

TEST_CASE("extension over the whole domain returns the partial map or nothing")
{
    auto g = fixture::load("office_graph").kb.facts;
    auto all = NodeSet::all(g);
    auto id = identity_projection(g);
    auto ext = extend_projection(g, all, id, g);
    REQUIRE(ext.projections.size() == 1);
    CHECK(ext.projections.front() == id);

    auto bad = id;
    std::swap(bad.concept_map[0], bad.concept_map[1]);
    CHECK_THROWS_AS(extend_projection(g, all, bad, g), PreconditionError);
}

TEST_CASE("property: solver matches brute force")
{
    gen::Rng rng(31);
    for (int round = 0; round < 300; ++round) {
        auto s = gen::support(rng, {3, 3, 3, 2});
        auto q = gen::graph(rng, s, {4, 4, 0.2});
        auto t = gen::graph(rng, s, {6, 6, 0.2});
        auto expected = oracle::brute_force_projections(q, t);
        auto got = enumerate_projections(q, t).projections;
        CHECK(std::set<Projection>(got.begin(), got.end()) == expected);
        CHECK(got.size() == expected.size());
        CHECK(exists_projection(q, t) == ! expected.empty());
        auto serial = enumerate_projections_serial(q, t).projections;
        auto parallel = enumerate_projections(q, t, {no_limit, true}).projections;
        CHECK(serial == got);
        CHECK(parallel == got);
    }
}

TEST_CASE("property: projections compose")
{
    gen::Rng rng(32);
    int composed = 0;
    for (int round = 0; round < 300; ++round) {
        auto s = gen::support(rng, {3, 2, 2, 1});
        auto a = gen::graph(rng, s, {3, 3, 0.2});
        auto b = gen::graph(rng, s, {4, 4, 0.2});
        auto c = gen::graph(rng, s, {5, 6, 0.2});
        auto p = find_projection(a, b);
        auto p2 = find_projection(b, c);
        if (p && p2) {
            CHECK(is_projection(a, c, compose(*p, *p2)));
            ++composed;
        }
    }
    CHECK(composed > 0);
}
