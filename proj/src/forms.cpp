#include <cgr/error.hpp>
#include <cgr/forms.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace cgr {

namespace {
    auto mix(std::uint64_t h, std::uint64_t v) -> std::uint64_t
    {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h * 0x100000001b3ULL;
    }

    auto without(const SimpleGraph & g, bool concept_node, int x) -> Subgraph
    {
        auto keep = NodeSet::all(g);
        if (concept_node)
            keep.concepts[static_cast<std::size_t>(x)] = 0;
        else
            keep.relations[static_cast<std::size_t>(x)] = 0;
        return induced_subgraph(g, keep);
    }

    // An individual node whose marker is unique can never leave the image.
    auto pinned_individual(const SimpleGraph & g, int c) -> bool
    {
        auto & label = g.concept_at(c).label;
        if (label.is_generic())
            return false;
        for (int d = 0; d < g.concept_count(); ++d)
            if (d != c && g.concept_at(d).label.marker == label.marker)
                return false;
        return true;
    }

    struct Coloring {
        std::vector<std::uint64_t> concepts;
        std::vector<std::uint64_t> relations;
    };

    auto initial_coloring(const SimpleGraph & g) -> Coloring
    {
        Coloring col;
        for (auto & c : g.concepts())
            col.concepts.push_back(mix(mix(1, static_cast<std::uint64_t>(c.label.type)), static_cast<std::uint64_t>(c.label.marker + 2)));
        for (auto & r : g.relations())
            col.relations.push_back(mix(2, static_cast<std::uint64_t>(r.type)));
        return col;
    }

    auto refine_step(const SimpleGraph & g, const Coloring & col) -> Coloring
    {
        Coloring next;
        for (int c = 0; c < g.concept_count(); ++c) {
            std::vector<std::uint64_t> around;
            for (auto [r, pos] : g.incidence(c))
                around.push_back(mix(col.relations[static_cast<std::size_t>(r)], static_cast<std::uint64_t>(pos)));
            std::sort(around.begin(), around.end());
            auto h = col.concepts[static_cast<std::size_t>(c)];
            for (auto a : around)
                h = mix(h, a);
            next.concepts.push_back(h);
        }
        for (int r = 0; r < g.relation_count(); ++r) {
            auto h = col.relations[static_cast<std::size_t>(r)];
            for (auto a : g.relation_at(r).args)
                h = mix(h, col.concepts[static_cast<std::size_t>(a)]);
            next.relations.push_back(h);
        }
        return next;
    }

    auto classes(const Coloring & col) -> std::size_t
    {
        std::set<std::uint64_t> seen(col.concepts.begin(), col.concepts.end());
        seen.insert(col.relations.begin(), col.relations.end());
        return seen.size();
    }

    auto histogram(const Coloring & col) -> std::vector<std::uint64_t>
    {
        auto all = col.concepts;
        all.insert(all.end(), col.relations.begin(), col.relations.end());
        std::sort(all.begin(), all.end());
        return all;
    }

    class IsoSearch {
    public:
        IsoSearch(const SimpleGraph & g, const SimpleGraph & h, const Coloring & cg, const Coloring & ch) :
            g_(g),
            h_(h),
            cg_(cg),
            ch_(ch),
            map_(static_cast<std::size_t>(g.concept_count()), -1),
            used_(static_cast<std::size_t>(h.concept_count()), 0)
        {
            for (int r = 0; r < h.relation_count(); ++r)
                ++target_[{h.relation_at(r).type, h.relation_at(r).args}];
            order_.resize(static_cast<std::size_t>(g.concept_count()));
            std::iota(order_.begin(), order_.end(), 0);
            std::map<std::uint64_t, int> size;
            for (auto c : cg.concepts)
                ++size[c];
            std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
                return size[cg.concepts[static_cast<std::size_t>(a)]] < size[cg.concepts[static_cast<std::size_t>(b)]];
            });
        }

        auto run(std::size_t depth = 0) -> bool
        {
            if (depth == order_.size())
                return final_check();
            int c = order_[depth];
            for (int d = 0; d < h_.concept_count(); ++d) {
                if (used_[static_cast<std::size_t>(d)] || ch_.concepts[static_cast<std::size_t>(d)] != cg_.concepts[static_cast<std::size_t>(c)])
                    continue;
                map_[static_cast<std::size_t>(c)] = d;
                used_[static_cast<std::size_t>(d)] = 1;
                if (consistent(c) && run(depth + 1))
                    return true;
                used_[static_cast<std::size_t>(d)] = 0;
                map_[static_cast<std::size_t>(c)] = -1;
            }
            return false;
        }

    private:
        auto consistent(int c) -> bool
        {
            for (auto [r, pos] : g_.incidence(c)) {
                auto & rel = g_.relation_at(r);
                std::vector<int> args;
                bool complete = true;
                for (auto a : rel.args) {
                    auto m = map_[static_cast<std::size_t>(a)];
                    complete = complete && m >= 0;
                    args.push_back(m);
                }
                if (complete && ! target_.contains({rel.type, args}))
                    return false;
            }
            return true;
        }

        auto final_check() -> bool
        {
            std::map<std::pair<TypeId, std::vector<int>>, int> mapped;
            for (int r = 0; r < g_.relation_count(); ++r) {
                auto args = g_.relation_at(r).args;
                for (auto & a : args)
                    a = map_[static_cast<std::size_t>(a)];
                ++mapped[{g_.relation_at(r).type, args}];
            }
            return mapped == target_;
        }

        const SimpleGraph & g_;
        const SimpleGraph & h_;
        const Coloring & cg_;
        const Coloring & ch_;
        std::vector<int> map_;
        std::vector<char> used_;
        std::vector<int> order_;
        std::map<std::pair<TypeId, std::vector<int>>, int> target_;
    };
}

auto is_redundant(const SimpleGraph & g) -> bool
{
    for (int c = 0; c < g.concept_count(); ++c)
        if (! pinned_individual(g, c) && exists_projection(g, without(g, true, c).graph))
            return true;
    for (int r = 0; r < g.relation_count(); ++r)
        if (exists_projection(g, without(g, false, r).graph))
            return true;
    return false;
}

auto irredundant_form(const SimpleGraph & g, RemovalOrder order) -> Core
{
    Core core{g, identity_projection(g), {}, {}};
    core.concept_origin = core.folding.concept_map;
    core.relation_origin = core.folding.relation_map;

    std::vector<std::pair<bool, int>> nodes;
    for (int c = 0; c < g.concept_count(); ++c)
        nodes.emplace_back(true, c);
    for (int r = 0; r < g.relation_count(); ++r)
        nodes.emplace_back(false, r);
    if (order == RemovalOrder::reverse)
        std::reverse(nodes.begin(), nodes.end());

    for (auto [is_concept, original] : nodes) {
        auto & origin = is_concept ? core.concept_origin : core.relation_origin;
        auto at = std::find(origin.begin(), origin.end(), original);
        if (at == origin.end())
            continue;
        int x = static_cast<int>(at - origin.begin());
        if (is_concept && pinned_individual(core.graph, x))
            continue;
        auto sub = without(core.graph, is_concept, x);
        auto p = find_projection(core.graph, sub.graph);
        if (! p)
            continue;
        core.folding = compose(core.folding, *p);
        std::vector<int> co, ro;
        for (auto i : sub.concept_origin)
            co.push_back(core.concept_origin[static_cast<std::size_t>(i)]);
        for (auto i : sub.relation_origin)
            ro.push_back(core.relation_origin[static_cast<std::size_t>(i)]);
        core.graph = std::move(sub.graph);
        core.concept_origin = std::move(co);
        core.relation_origin = std::move(ro);
    }

    // the folding restricted to the core is an automorphism; undo it so the
    // core is fixed pointwise
    std::vector<int> inv_c(core.concept_origin.size()), inv_r(core.relation_origin.size());
    for (std::size_t i = 0; i < core.concept_origin.size(); ++i)
        inv_c[static_cast<std::size_t>(core.folding.concept_map[static_cast<std::size_t>(core.concept_origin[i])])] = static_cast<int>(i);
    for (std::size_t i = 0; i < core.relation_origin.size(); ++i)
        inv_r[static_cast<std::size_t>(core.folding.relation_map[static_cast<std::size_t>(core.relation_origin[i])])] = static_cast<int>(i);
    core.folding = compose(core.folding, Projection{inv_c, inv_r});
    return core;
}

auto equivalent(const SimpleGraph & g, const SimpleGraph & h) -> bool
{
    return exists_projection(g, h) && exists_projection(h, g);
}

auto isomorphic(const SimpleGraph & g, const SimpleGraph & h, int bound) -> bool
{
    if (! g.support().same_as(h.support()))
        throw SupportMismatch();
    if (g.node_count() > bound || h.node_count() > bound)
        throw BoundExceeded("isomorphism test limited to " + std::to_string(bound) + " nodes");
    if (g.concept_count() != h.concept_count() || g.relation_count() != h.relation_count())
        return false;

    auto cg = initial_coloring(g), ch = initial_coloring(h);
    while (true) {
        if (histogram(cg) != histogram(ch))
            return false;
        auto ng = refine_step(g, cg), nh = refine_step(h, ch);
        bool grew = classes(ng) > classes(cg) || classes(nh) > classes(ch);
        cg = std::move(ng);
        ch = std::move(nh);
        if (! grew)
            break;
    }
    if (histogram(cg) != histogram(ch))
        return false;
    return IsoSearch(g, h, cg, ch).run();
}

auto structural_signature(const SimpleGraph & g) -> std::uint64_t
{
    auto col = initial_coloring(g);
    while (true) {
        auto next = refine_step(g, col);
        bool grew = classes(next) > classes(col);
        col = std::move(next);
        if (! grew)
            break;
    }
    std::uint64_t h = mix(static_cast<std::uint64_t>(g.concept_count()), static_cast<std::uint64_t>(g.relation_count()));
    for (auto c : histogram(col))
        h = mix(h, c);
    return h;
}

} // namespace cgr
