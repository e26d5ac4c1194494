#include <cgr/error.hpp>
#include <cgr/kb.hpp>

#include <set>

namespace cgr {

auto KnowledgeBase::all_rules() const -> std::vector<Rule>
{
    auto rules = inference;
    rules.insert(rules.end(), evolution.begin(), evolution.end());
    return rules;
}

auto KnowledgeBase::rule_pointers() const -> std::vector<const Rule *>
{
    std::vector<const Rule *> result;
    for (auto & r : inference)
        result.push_back(&r);
    for (auto & r : evolution)
        result.push_back(&r);
    return result;
}

auto make_kb(SupportPtr support, SimpleGraph facts, std::vector<Rule> inference, std::vector<Rule> evolution,
    std::vector<Constraint> constraints) -> KnowledgeBase
{
    std::vector<std::string> diags;
    if (! facts.support_ptr())
        facts = SimpleGraph(support);
    if (! facts.support().same_as(*support))
        diags.emplace_back("facts are defined over a different support");
    for (auto & node : facts.concepts())
        if (node.label.type == support->not_there())
            diags.push_back("fact node '" + node.id + "' uses the reserved type");

    std::set<std::string> ids;
    auto check = [&](const std::string & what, const std::string & id, const ColoredGraph & body) {
        if (! ids.insert(id).second)
            diags.push_back("duplicate " + what + " id '" + id + "'");
        if (! body.graph.support().same_as(*support))
            diags.push_back(what + " '" + id + "' is defined over a different support");
    };
    for (auto & r : inference)
        check("rule", r.id(), r.body());
    for (auto & r : evolution)
        check("rule", r.id(), r.body());
    for (auto & c : constraints)
        check("constraint", c.id(), c.body());
    for (auto * rules : {&inference, &evolution})
        for (auto & r : *rules)
            for (auto & node : r.body().graph.concepts())
                if (node.label.type == support->not_there())
                    diags.push_back("rule '" + r.id() + "' uses the reserved type");
    if (! diags.empty())
        throw ValidationError(std::move(diags));

    return {std::move(support), normal_form(facts), std::move(inference), std::move(evolution), std::move(constraints)};
}

} // namespace cgr
