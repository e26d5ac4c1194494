#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/reasoner.hpp>

#include <deque>
#include <map>

namespace cgr {

auto to_string(Outcome o) -> std::string
{
    switch (o) {
    case Outcome::proved: return "Proved";
    case Outcome::refuted: return "Refuted";
    case Outcome::unknown: return "Unknown";
    }
    return "Unknown";
}

auto to_string(Model m) -> std::string
{
    switch (m) {
    case Model::sg: return "sg";
    case Model::sr: return "sr";
    case Model::sgc: return "sgc";
    case Model::src: return "src";
    case Model::sec: return "sec";
    case Model::srec: return "srec";
    }
    return "sg";
}

auto parse_model(const std::string & name) -> Model
{
    for (auto m : {Model::sg, Model::sr, Model::sgc, Model::src, Model::sec, Model::srec})
        if (to_string(m) == name)
            return m;
    throw Error("unknown model '" + name + "'");
}

namespace {
    auto limit(std::size_t v) -> std::size_t { return v == 0 ? no_limit : v; }

    void require_bounded(std::size_t value, const std::vector<Rule> & rules, const std::string & what)
    {
        if (value != 0)
            return;
        if (auto r = first_unrestricted(rules))
            throw PreconditionError("unbounded " + what + " needs range-restricted rules; rule '" + r->id() + "' is not");
    }

    auto node_map(const SimpleGraph & q, const SimpleGraph & g, const Projection & p) -> NodeMap
    {
        NodeMap m;
        for (int c = 0; c < q.concept_count(); ++c)
            m.emplace_back(q.concept_at(c).id, g.concept_at(p.concept_map[static_cast<std::size_t>(c)]).id);
        for (int r = 0; r < q.relation_count(); ++r)
            m.emplace_back(q.relation_at(r).id, g.relation_at(p.relation_map[static_cast<std::size_t>(r)]).id);
        return m;
    }

    auto first_violation(const SimpleGraph & g, const std::vector<Constraint> & constraints, bool negative_only = false)
        -> std::optional<Violation>
    {
        for (auto & c : constraints) {
            if (negative_only && c.polarity() != Polarity::negative)
                continue;
            auto vs = violations(g, c, {1, false});
            if (! vs.empty())
                return vs.front();
        }
        return std::nullopt;
    }

    auto project(const SimpleGraph & q, const SimpleGraph & g, const DerivationTrace & steps, std::size_t spent,
        bool exhaustive_if_absent) -> Verdict
    {
        Verdict v;
        v.budget_spent = spent;
        Certificate cert;
        cert.derivation = steps;
        if (auto p = find_projection(q, g)) {
            v.outcome = Outcome::proved;
            cert.projections.push_back(node_map(q, g, *p));
        }
        else if (exhaustive_if_absent) {
            v.outcome = Outcome::refuted;
            cert.exhaustive = true;
        }
        else
            return v;
        v.certificate = std::move(cert);
        return v;
    }

    auto refuted_by(Violation violation, DerivationTrace steps, std::size_t spent) -> Verdict
    {
        Verdict v;
        v.outcome = Outcome::refuted;
        v.budget_spent = spent;
        Certificate cert;
        cert.derivation = std::move(steps);
        cert.violations.push_back(std::move(violation));
        v.certificate = std::move(cert);
        return v;
    }

    auto consistent_by_search(DerivationTrace steps, std::size_t spent) -> Verdict
    {
        Verdict v;
        v.outcome = Outcome::proved;
        v.budget_spent = spent;
        Certificate cert;
        cert.derivation = std::move(steps);
        cert.exhaustive = true;
        v.certificate = std::move(cert);
        return v;
    }

    void note_ignored(Verdict & v, bool present, const std::string & what, Model model)
    {
        if (present)
            v.diagnostics.push_back(what + " ignored under model " + to_string(model));
    }
}

auto sg_deduce(const SimpleGraph & q, const KnowledgeBase & kb) -> Verdict
{
    auto v = project(q, kb.facts, {}, 0, true);
    note_ignored(v, ! kb.inference.empty() || ! kb.evolution.empty(), "rules", Model::sg);
    note_ignored(v, ! kb.constraints.empty(), "constraints", Model::sg);
    return v;
}

auto sr_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    auto rules = kb.all_rules();
    Verdict v;
    if (all_range_restricted(rules)) {
        auto d = derive(kb.facts, rules);
        v = project(q, d.graph, d.steps, d.steps.size(), true);
    }
    else {
        require_bounded(budget.max_rule_applications, rules, "rule applications");
        DeriveOptions options;
        options.budget = limit(budget.max_rule_applications);
        options.round_end = [&](const Derivation & d) { return ! exists_projection(q, d.graph); };
        Derivation d{kb.facts, {}, {}, false, false, 0};
        if (! exists_projection(q, d.graph))
            derive_more(d, rules, options);
        v = project(q, d.graph, d.steps, d.steps.size(), d.fixpoint);
    }
    note_ignored(v, ! kb.constraints.empty(), "constraints", Model::sr);
    return v;
}

auto sgc_consistent(const KnowledgeBase & kb) -> Verdict
{
    Verdict v;
    if (auto violation = first_violation(kb.facts, kb.constraints))
        v = refuted_by(std::move(*violation), {}, 0);
    else
        v = consistent_by_search({}, 0);
    note_ignored(v, ! kb.inference.empty() || ! kb.evolution.empty(), "rules", Model::sgc);
    return v;
}

auto sgc_deduce(const SimpleGraph & q, const KnowledgeBase & kb) -> Verdict
{
    auto consistency = sgc_consistent(kb);
    if (consistency.outcome == Outcome::refuted)
        return consistency;
    auto v = project(q, kb.facts, {}, 0, true);
    note_ignored(v, ! kb.inference.empty() || ! kb.evolution.empty(), "rules", Model::sgc);
    return v;
}

auto src_consistent(const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    auto & rules = kb.inference;
    Verdict v;
    if (all_range_restricted(rules)) {
        // the closure stands for every derivable graph
        auto d = derive(kb.facts, rules);
        if (auto violation = first_violation(d.graph, kb.constraints))
            v = refuted_by(std::move(*violation), d.steps, d.steps.size());
        else
            v = consistent_by_search(d.steps, d.steps.size());
    }
    else {
        require_bounded(budget.max_rule_applications, rules, "rule applications");
        std::optional<Violation> found = first_violation(kb.facts, kb.constraints, true);
        Derivation d{kb.facts, {}, {}, false, false, 0};
        DeriveOptions options;
        options.budget = limit(budget.max_rule_applications);
        options.round_end = [&](const Derivation & now) {
            found = first_violation(now.graph, kb.constraints, true);
            return ! found.has_value();
        };
        if (! found) {
            derive_more(d, rules, options);
            if (! found)
                found = first_violation(d.graph, kb.constraints, ! d.fixpoint);
        }
        if (found)
            v = refuted_by(std::move(*found), d.steps, d.steps.size());
        else if (d.fixpoint)
            v = consistent_by_search(d.steps, d.steps.size());
        else
            v.budget_spent = d.steps.size();
    }
    note_ignored(v, ! kb.evolution.empty(), "evolution rules", Model::src);
    return v;
}

auto src_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    auto consistency = src_consistent(kb, budget);
    if (consistency.outcome == Outcome::refuted)
        return consistency;
    KnowledgeBase inference_only{kb.support, kb.facts, kb.inference, {}, {}};
    auto deduction = sr_deduce(q, inference_only, budget);
    deduction.budget_spent += consistency.budget_spent;
    if (consistency.outcome == Outcome::unknown && deduction.outcome == Outcome::proved) {
        deduction.outcome = Outcome::unknown;
        deduction.certificate.reset();
        deduction.diagnostics.emplace_back("query derivable but consistency undecided within budget");
    }
    note_ignored(deduction, ! kb.evolution.empty(), "evolution rules", Model::src);
    return deduction;
}

auto restorable(const Violation & v, const Constraint & c, const SimpleGraph & g, const std::vector<Rule> & rules,
    const Budget & budget) -> Verdict
{
    Verdict result;
    if (v.kind == Polarity::negative) {
        result.outcome = Outcome::refuted;
        result.certificate = Certificate{};
        result.certificate->violations.push_back(v);
        result.diagnostics.emplace_back("violations of negative constraints are never restorable");
        return result;
    }

    auto rule = c.as_rule();
    // graft criterion: the violation is repaired in H iff H with the
    // obligation grafted along pi still projects into H
    auto repaired = [&](const SimpleGraph & h) {
        Projection pi;
        auto & t = c.trigger();
        for (int x = 0; x < t.concept_count(); ++x) {
            auto found = h.find_concept(v.node_map[static_cast<std::size_t>(x)].second);
            if (! found)
                throw PreconditionError("violation refers to unknown node '" + v.node_map[static_cast<std::size_t>(x)].second + "'");
            pi.concept_map.push_back(*found);
        }
        for (int x = 0; x < t.relation_count(); ++x) {
            auto & id = v.node_map[static_cast<std::size_t>(t.concept_count() + x)].second;
            auto found = h.find_relation(id);
            if (! found)
                throw PreconditionError("violation refers to unknown node '" + id + "'");
            pi.relation_map.push_back(*found);
        }
        if (extends(c, pi, h))
            return true;
        auto grafted = apply_rule(rule, h, pi);
        return ! grafted.changed || exists_projection(grafted.graph, h);
    };

    auto start = is_normal(g) ? g : normal_form(g);
    if (all_range_restricted(rules)) {
        auto d = derive(start, rules);
        result.outcome = repaired(d.graph) ? Outcome::proved : Outcome::refuted;
        result.budget_spent = d.steps.size();
        result.certificate = Certificate{d.steps, {}, {v}, 0, true};
        return result;
    }

    require_bounded(budget.max_restorability_depth, rules, "restorability depth");
    Derivation d{start, {}, {}, false, false, 0};
    bool done = repaired(d.graph);
    if (! done) {
        DeriveOptions options;
        options.budget = limit(budget.max_restorability_depth);
        options.round_end = [&](const Derivation & now) {
            done = repaired(now.graph);
            return ! done;
        };
        derive_more(d, rules, options);
        done = done || repaired(d.graph);
    }
    result.budget_spent = d.steps.size();
    if (done)
        result.outcome = Outcome::proved;
    else if (d.fixpoint)
        result.outcome = Outcome::refuted;
    else
        return result;
    result.certificate = Certificate{d.steps, {}, {v}, 0, true};
    return result;
}

namespace {
    struct World {
        SimpleGraph graph;
        DerivationTrace path;
        std::set<std::string> used;
        bool certain = true;
    };

    class WorldIndex {
    public:
        /// False when an isomorphic world was already recorded.
        auto insert(const SimpleGraph & g) -> bool
        {
            auto & bucket = seen_[structural_signature(g)];
            for (auto & other : bucket) {
                if (g.node_count() > default_isomorphism_bound || other.node_count() > default_isomorphism_bound) {
                    if (g.fingerprint() == other.fingerprint())
                        return false;
                    continue;
                }
                if (isomorphic(g, other))
                    return false;
            }
            bucket.push_back(g);
            return true;
        }

    private:
        std::map<std::uint64_t, std::vector<SimpleGraph>> seen_;
    };

    enum class Consistency { consistent, inconsistent, undecided };

    struct Saturated {
        Derivation derivation;
        Consistency consistency = Consistency::undecided;
        std::optional<Violation> violation;
    };

    auto saturate(const SimpleGraph & g, const KnowledgeBase & kb, const Budget & budget) -> Saturated
    {
        Saturated s;
        s.derivation = Derivation{g, {}, {}, false, false, 0};
        DeriveOptions options;
        options.budget = limit(budget.max_rule_applications);
        derive_more(s.derivation, kb.inference, options);
        s.violation = first_violation(s.derivation.graph, kb.constraints, ! s.derivation.fixpoint);
        if (s.violation)
            s.consistency = Consistency::inconsistent;
        else if (s.derivation.fixpoint)
            s.consistency = Consistency::consistent;
        return s;
    }

    auto concat(DerivationTrace a, const DerivationTrace & b) -> DerivationTrace
    {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    // Breadth-first search over worlds. With `with_inference` each world is
    // saturated by the inference rules first.
    auto search_worlds(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget, bool with_inference) -> Verdict
    {
        Verdict v;
        std::size_t spent = 0;
        std::size_t explored = 0;
        bool truncated = false;
        bool undecided = false;

        auto settle = [&](const SimpleGraph & g, const DerivationTrace & path, bool certain) -> std::optional<World> {
            if (! with_inference) {
                if (auto violation = first_violation(g, kb.constraints)) {
                    if (path.empty())
                        v = refuted_by(std::move(*violation), {}, spent);
                    return std::nullopt;
                }
                return World{g, path, {}, certain};
            }
            auto s = saturate(g, kb, budget);
            spent += s.derivation.steps.size();
            if (s.consistency == Consistency::inconsistent) {
                if (path.empty())
                    v = refuted_by(std::move(*s.violation), s.derivation.steps, spent);
                return std::nullopt;
            }
            if (s.consistency == Consistency::undecided)
                undecided = true;
            return World{std::move(s.derivation.graph), concat(path, s.derivation.steps), {},
                certain && s.consistency == Consistency::consistent};
        };

        auto root = settle(kb.facts, {}, true);
        if (! root) {
            v.certificate->worlds_explored = 1;
            return v;
        }

        WorldIndex index;
        index.insert(root->graph);
        std::deque<World> frontier;
        frontier.push_back(std::move(*root));
        auto max_worlds = limit(budget.max_worlds);

        while (! frontier.empty()) {
            if (explored >= max_worlds) {
                truncated = true;
                break;
            }
            World w = std::move(frontier.front());
            frontier.pop_front();
            ++explored;

            if (auto p = find_projection(q, w.graph)) {
                if (w.certain) {
                    v.outcome = Outcome::proved;
                    v.budget_spent = spent;
                    v.certificate = Certificate{w.path, {node_map(q, w.graph, *p)}, {}, explored, false};
                    return v;
                }
                undecided = true;
            }
            // descendants of an uncertain world stay uncertain and cannot prove anything
            if (! w.certain)
                continue;

            for (auto & rule : kb.evolution) {
                for (auto & pi : applicable_projections(rule, w.graph)) {
                    auto key = application_key(rule, w.graph, pi);
                    if (w.used.contains(key))
                        continue;
                    auto app = apply_rule(rule, w.graph, pi);
                    if (! app.changed)
                        continue;
                    ++spent;
                    DerivationStep step{rule.id(), RuleKind::evolution, node_map(rule.hypothesis(), w.graph, pi), app.graph.fingerprint()};
                    auto child = settle(app.graph, concat(w.path, {step}), w.certain);
                    if (! child || ! index.insert(child->graph))
                        continue;
                    child->used = w.used;
                    child->used.insert(key);
                    frontier.push_back(std::move(*child));
                }
            }
        }

        v.budget_spent = spent;
        if (truncated || undecided) {
            v.outcome = Outcome::unknown;
            return v;
        }
        v.outcome = Outcome::refuted;
        v.certificate = Certificate{{}, {}, {}, explored, true};
        return v;
    }
}

auto sec_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    require_bounded(budget.max_worlds, kb.evolution, "world search");
    auto v = search_worlds(q, kb, budget, false);
    note_ignored(v, ! kb.inference.empty(), "inference rules", Model::sec);
    return v;
}

auto srec_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    require_bounded(budget.max_rule_applications, kb.inference, "rule applications");
    require_bounded(budget.max_worlds, kb.evolution, "world search");
    return search_worlds(q, kb, budget, true);
}

auto check_consistency(const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    return kb.inference.empty() ? sgc_consistent(kb) : src_consistent(kb, budget);
}

auto ask(Model model, const std::optional<SimpleGraph> & q, const KnowledgeBase & kb, const Budget & budget) -> Verdict
{
    if (! q) {
        switch (model) {
        case Model::sg:
        case Model::sr: {
            Verdict v = consistent_by_search({}, 0);
            v.diagnostics.emplace_back("no constraints under model " + to_string(model) + "; trivially consistent");
            return v;
        }
        case Model::sgc:
        case Model::sec: return sgc_consistent(kb);
        case Model::src:
        case Model::srec: return src_consistent(kb, budget);
        }
    }
    switch (model) {
    case Model::sg: return sg_deduce(*q, kb);
    case Model::sr: return sr_deduce(*q, kb, budget);
    case Model::sgc: return sgc_deduce(*q, kb);
    case Model::src: return src_deduce(*q, kb, budget);
    case Model::sec: return sec_deduce(*q, kb, budget);
    case Model::srec: return srec_deduce(*q, kb, budget);
    }
    return {};
}

namespace {
    auto projection_from(const SimpleGraph & q, const SimpleGraph & g, const NodeMap & m) -> std::optional<Projection>
    {
        if (m.size() != static_cast<std::size_t>(q.node_count()))
            return std::nullopt;
        Projection p;
        for (int c = 0; c < q.concept_count(); ++c) {
            auto & [from, to] = m[static_cast<std::size_t>(c)];
            auto x = g.find_concept(to);
            if (from != q.concept_at(c).id || ! x)
                return std::nullopt;
            p.concept_map.push_back(*x);
        }
        for (int r = 0; r < q.relation_count(); ++r) {
            auto & [from, to] = m[static_cast<std::size_t>(q.concept_count() + r)];
            auto x = g.find_relation(to);
            if (from != q.relation_at(r).id || ! x)
                return std::nullopt;
            p.relation_map.push_back(*x);
        }
        if (! is_projection(q, g, p))
            return std::nullopt;
        return p;
    }

    auto check_violation(const Violation & v, const KnowledgeBase & kb, const SimpleGraph & g) -> std::string
    {
        auto it = std::find_if(kb.constraints.begin(), kb.constraints.end(), [&](auto & c) { return c.id() == v.constraint; });
        if (it == kb.constraints.end())
            return "violation names unknown constraint '" + v.constraint + "'";
        auto target = it->polarity() == Polarity::positive ? irredundant_form(g).graph : g;
        auto pi = projection_from(it->trigger(), target, v.node_map);
        if (! pi)
            return "violation of '" + v.constraint + "' is not a trigger projection";
        if (extends(*it, *pi, target) != (it->polarity() == Polarity::negative))
            return "violation of '" + v.constraint + "' does not hold";
        return {};
    }

    // Consistency of each world along an evolution path.
    auto check_worlds(const KnowledgeBase & kb, const DerivationTrace & path, Model model) -> std::string
    {
        auto rules = kb.rule_pointers();
        SimpleGraph g = kb.facts;
        auto world_ok = [&](const SimpleGraph & w) { return ! first_violation(w, kb.constraints).has_value(); };
        for (std::size_t i = 0; i < path.size(); ++i) {
            bool boundary = path[i].kind == RuleKind::evolution;
            if (boundary && ! world_ok(g))
                return "world before step " + std::to_string(i + 1) + " is inconsistent";
            SimpleGraph next;
            auto diag = replay(g, rules, {path[i]}, &next);
            if (! diag.empty())
                return "step " + std::to_string(i + 1) + ": " + diag;
            g = std::move(next);
            if (model == Model::sec && ! world_ok(g))
                return "world after step " + std::to_string(i + 1) + " is inconsistent";
        }
        if (! world_ok(g))
            return "final world is inconsistent";
        return {};
    }
}

auto verify(const Verdict & v, Model model, const std::optional<SimpleGraph> & q, const KnowledgeBase & kb, const Budget & budget)
    -> std::string
{
    if (! v.certificate)
        return v.outcome == Outcome::unknown ? std::string{} : "decided verdict without a certificate";
    auto & cert = *v.certificate;

    if (cert.exhaustive) {
        auto again = ask(model, q, kb, budget);
        return again.outcome == v.outcome ? std::string{} : "search re-run gives " + to_string(again.outcome);
    }

    SimpleGraph g;
    auto diag = replay(kb.facts, kb.rule_pointers(), cert.derivation, &g);
    if (! diag.empty())
        return diag;

    if (v.outcome == Outcome::proved) {
        if (! q || cert.projections.empty())
            return "proof without a query projection";
        for (auto & m : cert.projections)
            if (! projection_from(*q, g, m))
                return "certificate projection is not a projection of the query";
        if (model == Model::sec || model == Model::srec)
            return check_worlds(kb, cert.derivation, model);
        if (model == Model::sgc && first_violation(kb.facts, kb.constraints))
            return "facts are inconsistent";
        return {};
    }

    if (v.outcome == Outcome::refuted) {
        if (cert.violations.empty())
            return "refutation without a violation";
        for (auto & violation : cert.violations) {
            auto d = check_violation(violation, kb, g);
            if (! d.empty())
                return d;
        }
        return {};
    }
    return "Unknown verdict with a certificate";
}

} // namespace cgr
