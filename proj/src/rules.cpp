#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/rules.hpp>

#include <algorithm>
#include <limits>

namespace cgr {

auto classify(const ColoredGraph & k) -> RuleClassification
{
    RuleClassification result{true, true};
    for (int c = 0; c < k.graph.concept_count(); ++c)
        if (k.concept_colored(c, 1) && k.graph.concept_at(c).label.is_generic())
            result.range_restricted = false;
    for (int r = 0; r < k.graph.relation_count(); ++r)
        if (k.relation_colored(r, 1))
            for (auto a : k.graph.relation_at(r).args)
                if (k.concept_colored(a, 0))
                    result.disconnected = false;
    return result;
}

Rule::Rule(std::string id, ColoredGraph body) :
    id_(std::move(id)),
    body_(std::move(body))
{
    validate_colored(body_);
    hypothesis_ = part_zero(body_);
    hyp_index_.assign(static_cast<std::size_t>(body_.graph.concept_count()), -1);
    for (std::size_t i = 0; i < hypothesis_.concept_origin.size(); ++i)
        hyp_index_[static_cast<std::size_t>(hypothesis_.concept_origin[i])] = static_cast<int>(i);
    classification_ = classify(body_);
}

auto application_key(const Rule & rule, const SimpleGraph & g, const Projection & pi) -> std::string
{
    std::string key = rule.id();
    key += '|';
    for (auto c : pi.concept_map) {
        key += g.concept_at(c).id;
        key += ',';
    }
    key += '|';
    for (auto r : pi.relation_map) {
        key += g.relation_at(r).id;
        key += ',';
    }
    return key;
}

auto applicable_projections(const Rule & rule, const SimpleGraph & g) -> std::vector<Projection>
{
    return enumerate_projections(rule.hypothesis(), g).projections;
}

auto apply_rule(const Rule & rule, const SimpleGraph & g, const Projection & pi) -> Application
{
    if (! is_projection(rule.hypothesis(), g, pi)
        || std::count(pi.concept_map.begin(), pi.concept_map.end(), -1) > 0
        || std::count(pi.relation_map.begin(), pi.relation_map.end(), -1) > 0)
        throw PreconditionError("invalid projection for rule '" + rule.id() + "'");

    Application app{g, false};
    auto & out = app.graph;
    auto & body = rule.body();

    std::vector<int> image(static_cast<std::size_t>(body.graph.concept_count()), -1);
    for (int c = 0; c < body.graph.concept_count(); ++c) {
        if (body.concept_colored(c, 0)) {
            image[static_cast<std::size_t>(c)] = pi.concept_map[static_cast<std::size_t>(rule.hypothesis_index(c))];
            continue;
        }
        auto & label = body.graph.concept_at(c).label;
        if (! label.is_generic()) {
            // existing nodes win the merge
            for (int x = 0; x < out.concept_count(); ++x)
                if (out.concept_at(x).label.marker == label.marker) {
                    image[static_cast<std::size_t>(c)] = x;
                    break;
                }
            if (image[static_cast<std::size_t>(c)] >= 0)
                continue;
        }
        image[static_cast<std::size_t>(c)] = out.add_concept(out.fresh_id(), label);
        app.changed = true;
    }

    for (int r = 0; r < body.graph.relation_count(); ++r) {
        if (! body.relation_colored(r, 1))
            continue;
        auto & rel = body.graph.relation_at(r);
        std::vector<int> args;
        for (auto a : rel.args)
            args.push_back(image[static_cast<std::size_t>(a)]);
        bool twin = false;
        for (auto [x, pos] : out.incidence(args[0]))
            if (pos == 0 && out.relation_at(x).type == rel.type && out.relation_at(x).args == args) {
                twin = true;
                break;
            }
        if (twin)
            continue;
        out.add_relation(out.fresh_id(), rel.type, std::move(args));
        app.changed = true;
    }
    return app;
}

namespace {
    auto step_for(const Rule & rule, const SimpleGraph & g, const Projection & pi, RuleKind kind) -> DerivationStep
    {
        DerivationStep step{rule.id(), kind, {}, 0};
        auto & hyp = rule.hypothesis();
        for (int c = 0; c < hyp.concept_count(); ++c)
            step.node_map.emplace_back(hyp.concept_at(c).id, g.concept_at(pi.concept_map[static_cast<std::size_t>(c)]).id);
        for (int r = 0; r < hyp.relation_count(); ++r)
            step.node_map.emplace_back(hyp.relation_at(r).id, g.relation_at(pi.relation_map[static_cast<std::size_t>(r)]).id);
        return step;
    }

    enum class Outcome { used, changed, blocked };

    // Tries one application; `blocked` means it would change the graph but the
    // budget is spent.
    auto attempt(const Rule & rule, const Projection & pi, Derivation & d, const DeriveOptions & options) -> Outcome
    {
        auto key = application_key(rule, d.graph, pi);
        if (d.used.contains(key))
            return Outcome::used;
        auto app = apply_rule(rule, d.graph, pi);
        if (app.changed && d.steps.size() >= options.budget) {
            d.exhausted = true;
            return Outcome::blocked;
        }
        d.used.insert(std::move(key));
        if (! app.changed)
            return Outcome::used;
        auto step = step_for(rule, d.graph, pi, options.kind);
        d.graph = std::move(app.graph);
        step.fingerprint = d.graph.fingerprint();
        d.steps.push_back(std::move(step));
        return Outcome::changed;
    }
}

auto apply_rule(const Rule & rule, const Projection & pi, Derivation & trace, RuleKind kind) -> bool
{
    auto key = application_key(rule, trace.graph, pi);
    if (trace.used.contains(key))
        throw UselessApplication("rule '" + rule.id() + "' already applied with this projection");
    auto app = apply_rule(rule, trace.graph, pi);
    trace.used.insert(std::move(key));
    if (! app.changed)
        return false;
    auto step = step_for(rule, trace.graph, pi, kind);
    trace.graph = std::move(app.graph);
    step.fingerprint = trace.graph.fingerprint();
    trace.steps.push_back(std::move(step));
    return true;
}

void derive_more(Derivation & d, const std::vector<Rule> & rules, const DeriveOptions & options)
{
    d.fixpoint = false;
    d.exhausted = false;
    if (options.strategy == Strategy::breadth) {
        while (true) {
            bool changed = false;
            for (auto & rule : rules) {
                SimpleGraph snapshot = d.graph;
                for_each_projection(rule.hypothesis(), snapshot, nullptr, [&](const Projection & pi) {
                    auto outcome = attempt(rule, pi, d, options);
                    changed = changed || outcome == Outcome::changed;
                    return outcome != Outcome::blocked;
                });
                if (d.exhausted)
                    break;
            }
            ++d.rounds;
            if (! changed && ! d.exhausted)
                d.fixpoint = true;
            if (d.fixpoint || d.exhausted)
                return;
            if (options.round_end && ! options.round_end(d))
                return;
        }
    }

    while (true) {
        bool changed = false;
        for (auto & rule : rules) {
            SimpleGraph snapshot = d.graph;
            for_each_projection(rule.hypothesis(), snapshot, nullptr, [&](const Projection & pi) {
                auto outcome = attempt(rule, pi, d, options);
                changed = outcome == Outcome::changed;
                return outcome == Outcome::used;
            });
            if (changed || d.exhausted)
                break;
        }
        ++d.rounds;
        if (d.exhausted)
            return;
        if (! changed) {
            d.fixpoint = true;
            return;
        }
    }
}

auto derive(const SimpleGraph & g, const std::vector<Rule> & rules, const DeriveOptions & options) -> Derivation
{
    for (auto & r : rules)
        if (! r.body().graph.support().same_as(g.support()))
            throw SupportMismatch();
    Derivation d{is_normal(g) ? g : normal_form(g), {}, {}, false, false, 0};
    derive_more(d, rules, options);
    return d;
}

auto all_range_restricted(const std::vector<Rule> & rules) -> bool
{
    return first_unrestricted(rules) == nullptr;
}

auto first_unrestricted(const std::vector<Rule> & rules) -> const Rule *
{
    for (auto & r : rules)
        if (! r.range_restricted())
            return &r;
    return nullptr;
}

auto closure(const SimpleGraph & g, const std::vector<Rule> & rules, std::optional<std::size_t> budget) -> Derivation
{
    if (! budget) {
        if (auto r = first_unrestricted(rules))
            throw PreconditionError("closure without a budget needs range-restricted rules; rule '" + r->id() + "' is not");
    }
    DeriveOptions options;
    options.budget = budget.value_or(no_limit);
    auto d = derive(g, rules, options);
    if (! d.fixpoint)
        throw BudgetExhausted("no closed graph within " + std::to_string(options.budget) + " rule applications");
    return d;
}

auto full_graph(const SimpleGraph & g, const std::vector<Rule> & rules, std::optional<std::size_t> budget) -> SimpleGraph
{
    return irredundant_form(closure(g, rules, budget).graph).graph;
}

auto decompose_rr(const Rule & rule) -> std::vector<Rule>
{
    if (! rule.range_restricted())
        throw PreconditionError("rule '" + rule.id() + "' is not range restricted");
    auto & body = rule.body();
    auto & g = body.graph;
    std::vector<Rule> result;
    int k = 0;

    auto build = [&](const std::vector<int> & extra_concepts, int target_concept, int target_relation) {
        NodeSet keep = NodeSet::none(g);
        ColoredGraph out{SimpleGraph(g.support_ptr()), {}, {}};
        std::vector<int> index(static_cast<std::size_t>(g.concept_count()), -1);
        for (int c = 0; c < g.concept_count(); ++c) {
            bool zero = body.concept_colored(c, 0);
            bool extra = std::find(extra_concepts.begin(), extra_concepts.end(), c) != extra_concepts.end();
            if (! zero && ! extra && c != target_concept)
                continue;
            index[static_cast<std::size_t>(c)] = out.graph.add_concept(g.concept_at(c).id, g.concept_at(c).label);
            out.concept_color.push_back(c == target_concept ? 1 : 0);
        }
        for (int r = 0; r < g.relation_count(); ++r) {
            if (! body.relation_colored(r, 0) && r != target_relation)
                continue;
            auto args = g.relation_at(r).args;
            for (auto & a : args)
                a = index[static_cast<std::size_t>(a)];
            out.graph.add_relation(g.relation_at(r).id, g.relation_at(r).type, std::move(args));
            out.relation_color.push_back(r == target_relation ? 1 : 0);
        }
        result.emplace_back(rule.id() + "." + std::to_string(k++), std::move(out));
    };

    std::vector<int> individuals;
    for (int c = 0; c < g.concept_count(); ++c)
        if (body.concept_colored(c, 1)) {
            individuals.push_back(c);
            build({}, c, -1);
        }
    for (int r = 0; r < g.relation_count(); ++r)
        if (body.relation_colored(r, 1))
            build(individuals, -1, r);
    return result;
}

namespace {
    auto sat_add(std::uint64_t a, std::uint64_t b) -> std::uint64_t
    {
        auto max = std::numeric_limits<std::uint64_t>::max();
        return a > max - b ? max : a + b;
    }

    auto sat_mul(std::uint64_t a, std::uint64_t b) -> std::uint64_t
    {
        auto max = std::numeric_limits<std::uint64_t>::max();
        if (a != 0 && b > max / a)
            return max;
        return a * b;
    }
}

auto closure_bounds(const SimpleGraph & g, const std::vector<Rule> & rules) -> ClosureBounds
{
    ClosureBounds b;
    std::uint64_t widest = 0;
    std::set<TypeId> types;
    for (auto & rule : rules) {
        auto & body = rule.body();
        std::uint64_t created = 0;
        for (int c = 0; c < body.graph.concept_count(); ++c)
            if (body.concept_colored(c, 1))
                ++created;
        widest = std::max(widest, created);
        for (int r = 0; r < body.graph.relation_count(); ++r)
            if (body.relation_colored(r, 1))
                types.insert(body.graph.relation_at(r).type);
    }
    b.M = sat_mul(rules.size(), widest);
    for (auto t : types) {
        int n = g.support().arity(t);
        ++b.P[n];
        b.k = std::max(b.k, n);
    }
    auto base = sat_add(static_cast<std::uint64_t>(g.concept_count()), b.M);
    for (auto [n, count] : b.P) {
        std::uint64_t power = 1;
        for (int i = 0; i < n; ++i)
            power = sat_mul(power, base);
        b.N = sat_add(b.N, sat_mul(count, power));
    }
    b.L = sat_add(b.N, b.M);
    return b;
}

auto replay(const SimpleGraph & start, const std::vector<const Rule *> & rules, const DerivationTrace & trace, SimpleGraph * result)
    -> std::string
{
    SimpleGraph g = is_normal(start) ? start : normal_form(start);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        auto & step = trace[i];
        auto where = "step " + std::to_string(i + 1) + ": ";
        auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule * r) { return r->id() == step.rule; });
        if (it == rules.end())
            return where + "unknown rule '" + step.rule + "'";
        auto & rule = **it;
        auto & hyp = rule.hypothesis();
        if (step.node_map.size() != static_cast<std::size_t>(hyp.node_count()))
            return where + "node map does not cover the hypothesis";
        Projection pi;
        for (int c = 0; c < hyp.concept_count(); ++c) {
            auto x = g.find_concept(step.node_map[static_cast<std::size_t>(c)].second);
            if (! x)
                return where + "unknown node '" + step.node_map[static_cast<std::size_t>(c)].second + "'";
            pi.concept_map.push_back(*x);
        }
        for (int r = 0; r < hyp.relation_count(); ++r) {
            auto & entry = step.node_map[static_cast<std::size_t>(hyp.concept_count() + r)];
            auto x = g.find_relation(entry.second);
            if (! x)
                return where + "unknown node '" + entry.second + "'";
            pi.relation_map.push_back(*x);
        }
        if (! is_projection(hyp, g, pi))
            return where + "node map is not a projection";
        auto app = apply_rule(rule, g, pi);
        g = std::move(app.graph);
        if (g.fingerprint() != step.fingerprint)
            return where + "fingerprint mismatch";
    }
    if (result)
        *result = std::move(g);
    return {};
}

} // namespace cgr
