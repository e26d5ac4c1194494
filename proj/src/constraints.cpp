#include <cgr/constraints.hpp>
#include <cgr/error.hpp>
#include <cgr/forms.hpp>

namespace cgr {

Constraint::Constraint(std::string id, ColoredGraph body, Polarity polarity) :
    id_(std::move(id)),
    body_(std::move(body)),
    polarity_(polarity)
{
    validate_colored(body_);
    trigger_ = part_zero(body_);
    classification_ = classify(body_);
}

namespace {
    auto lift(const Constraint & c, const Projection & trigger_pi) -> std::pair<NodeSet, Projection>
    {
        auto & whole = c.body().graph;
        NodeSet domain = NodeSet::none(whole);
        Projection partial{std::vector<int>(static_cast<std::size_t>(whole.concept_count()), -1),
            std::vector<int>(static_cast<std::size_t>(whole.relation_count()), -1)};
        for (std::size_t i = 0; i < c.trigger_concept_origin().size(); ++i) {
            auto b = static_cast<std::size_t>(c.trigger_concept_origin()[i]);
            domain.concepts[b] = 1;
            partial.concept_map[b] = trigger_pi.concept_map[i];
        }
        for (std::size_t i = 0; i < c.trigger_relation_origin().size(); ++i) {
            auto b = static_cast<std::size_t>(c.trigger_relation_origin()[i]);
            domain.relations[b] = 1;
            partial.relation_map[b] = trigger_pi.relation_map[i];
        }
        return {domain, partial};
    }

    auto make_violation(const Constraint & c, const SimpleGraph & target, const Projection & pi) -> Violation
    {
        Violation v{c.id(), c.polarity(), pi, {}};
        auto & t = c.trigger();
        for (int x = 0; x < t.concept_count(); ++x)
            v.node_map.emplace_back(t.concept_at(x).id, target.concept_at(pi.concept_map[static_cast<std::size_t>(x)]).id);
        for (int x = 0; x < t.relation_count(); ++x)
            v.node_map.emplace_back(t.relation_at(x).id, target.relation_at(pi.relation_map[static_cast<std::size_t>(x)]).id);
        return v;
    }

    // The 1-colored part of a disconnected constraint, as a graph of its own.
    auto obligation(const Constraint & c) -> SimpleGraph
    {
        auto keep = NodeSet::none(c.body().graph);
        for (std::size_t i = 0; i < keep.concepts.size(); ++i)
            keep.concepts[i] = c.body().concept_color[i] == 1;
        for (std::size_t i = 0; i < keep.relations.size(); ++i)
            keep.relations[i] = c.body().relation_color[i] == 1;
        return induced_subgraph(c.body().graph, keep).graph;
    }

    auto checked_graph(const SimpleGraph & g, Polarity p) -> SimpleGraph
    {
        auto normal = is_normal(g) ? g : normal_form(g);
        if (p == Polarity::negative)
            return normal;
        return irredundant_form(normal).graph;
    }
}

auto extends(const Constraint & c, const Projection & trigger_pi, const SimpleGraph & target) -> bool
{
    auto [domain, partial] = lift(c, trigger_pi);
    return ! extend_projection(c.body().graph, domain, partial, target, {1, false}).projections.empty();
}

auto violations(const SimpleGraph & g, const Constraint & c, CheckOptions options) -> std::vector<Violation>
{
    if (! g.support().same_as(c.body().graph.support()))
        throw SupportMismatch();
    auto target = checked_graph(g, c.polarity());
    std::vector<Violation> result;

    if (c.polarity() == Polarity::positive && c.classification().disconnected) {
        if (exists_projection(obligation(c), target))
            return result;
        for_each_projection(c.trigger(), target, nullptr, [&](const Projection & pi) {
            result.push_back(make_violation(c, target, pi));
            return result.size() < options.limit;
        });
        return result;
    }

    bool want_extension = c.polarity() == Polarity::negative;
    if (! options.parallel) {
        for_each_projection(c.trigger(), target, nullptr, [&](const Projection & pi) {
            if (extends(c, pi, target) == want_extension)
                result.push_back(make_violation(c, target, pi));
            return result.size() < options.limit;
        });
        return result;
    }

    auto triggers = enumerate_projections(c.trigger(), target, {no_limit, true}).projections;
    std::vector<char> hit(triggers.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < triggers.size(); ++i)
        hit[i] = extends(c, triggers[i], target) == want_extension;
    for (std::size_t i = 0; i < triggers.size() && result.size() < options.limit; ++i)
        if (hit[i])
            result.push_back(make_violation(c, target, triggers[i]));
    return result;
}

auto violations_reference(const SimpleGraph & g, const Constraint & c) -> std::vector<Violation>
{
    if (! g.support().same_as(c.body().graph.support()))
        throw SupportMismatch();
    auto target = checked_graph(g, c.polarity());
    std::vector<Violation> result;
    bool want_extension = c.polarity() == Polarity::negative;
    for (auto & pi : enumerate_projections_serial(c.trigger(), target).projections)
        if (extends(c, pi, target) == want_extension)
            result.push_back(make_violation(c, target, pi));
    return result;
}

auto satisfies(const SimpleGraph & g, const Constraint & c) -> bool
{
    return violations(g, c, {1, false}).empty();
}

auto negative_to_positive(const Constraint & c) -> Constraint
{
    if (c.polarity() != Polarity::negative)
        throw PreconditionError("constraint '" + c.id() + "' is not negative");
    auto & sup = c.body().graph.support();
    for (auto & node : c.body().graph.concepts())
        if (node.label.type == sup.not_there())
            throw PreconditionError("constraint '" + c.id() + "' already uses the reserved type");
    ColoredGraph body = color_all(c.body().graph, 0);
    body.graph.add_concept(body.graph.fresh_id("~nt"), {sup.not_there(), generic_marker});
    body.concept_color.push_back(1);
    return {c.id(), std::move(body), Polarity::positive};
}

} // namespace cgr
