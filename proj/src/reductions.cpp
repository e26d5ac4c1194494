#include <cgr/error.hpp>
#include <cgr/forms.hpp>
#include <cgr/reductions.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace cgr {

namespace {
    auto plain_name(const std::string & s) -> bool
    {
        return ! s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) {
            return std::isalnum(ch) || ch == '_' || ch == '-';
        });
    }

    // Assembles a colored graph by names.
    class Builder {
    public:
        explicit Builder(SupportPtr s) : g_(std::move(s)) {}

        auto concept_node(const std::string & id, const std::string & type, const std::string & marker = {}, int color = 0) -> int
        {
            auto & s = g_.support();
            auto t = s.find_concept(type);
            if (! t)
                throw Error("internal: unknown concept type '" + type + "'");
            auto m = generic_marker;
            if (! marker.empty())
                m = *s.find_marker(marker);
            concept_color_.push_back(static_cast<char>(color));
            return g_.add_concept(id, {*t, m});
        }

        auto relation_node(const std::string & id, const std::string & type, std::vector<int> args, int color = 0) -> int
        {
            auto t = g_.support().find_relation(type, static_cast<int>(args.size()));
            if (! t)
                throw Error("internal: unknown relation type '" + type + "'");
            relation_color_.push_back(static_cast<char>(color));
            return g_.add_relation(id, *t, std::move(args));
        }

        [[nodiscard]] auto graph() const -> const SimpleGraph & { return g_; }
        [[nodiscard]] auto colored() const -> ColoredGraph { return {g_, concept_color_, relation_color_}; }

    private:
        SimpleGraph g_;
        std::vector<char> concept_color_;
        std::vector<char> relation_color_;
    };

    auto sat_support(const CnfFormula & f) -> SupportPtr
    {
        SupportDeclarations d;
        for (auto & v : f.names) {
            d.concepts.push_back({"X_" + v, {}});
            d.concepts.push_back({"V_" + v, {}});
            d.concepts.push_back({"T_" + v, {"V_" + v}});
            d.concepts.push_back({"F_" + v, {"V_" + v}});
        }
        d.relations.push_back({"val", 2, {}});
        for (std::size_t i = 0; i < f.clauses.size(); ++i)
            d.relations.push_back({"C" + std::to_string(i + 1), static_cast<int>(f.clauses[i].size()), {}});
        return Support::validate(d);
    }

    // G(f): both truth values per variable, one clause relation node per
    // satisfying assignment of the clause's variables.
    auto sat_target(const CnfFormula & f, SupportPtr s, const std::vector<char> & linked) -> SimpleGraph
    {
        Builder b(std::move(s));
        std::vector<int> t_node, f_node;
        for (std::size_t v = 0; v < f.names.size(); ++v) {
            auto & n = f.names[v];
            auto x = b.concept_node("x_" + n, "X_" + n);
            t_node.push_back(b.concept_node("t_" + n, "T_" + n));
            f_node.push_back(b.concept_node("f_" + n, "F_" + n));
            if (linked[v]) {
                b.relation_node("vt_" + n, "val", {x, t_node.back()});
                b.relation_node("vf_" + n, "val", {x, f_node.back()});
            }
        }
        for (std::size_t i = 0; i < f.clauses.size(); ++i) {
            auto & clause = f.clauses[i];
            auto k = clause.size();
            for (unsigned mask = 0; mask < (1U << k); ++mask) {
                bool satisfied = false;
                std::vector<int> args;
                for (std::size_t j = 0; j < k; ++j) {
                    bool value = (mask >> j) & 1U;
                    satisfied = satisfied || value == clause[j].positive;
                    auto v = static_cast<std::size_t>(clause[j].var);
                    args.push_back(value ? t_node[v] : f_node[v]);
                }
                if (satisfied)
                    b.relation_node("c" + std::to_string(i + 1) + "_" + std::to_string(mask), "C" + std::to_string(i + 1), args);
            }
        }
        return b.graph();
    }

    // Q(f), with a color per variable and for the clause relations.
    auto sat_query(const CnfFormula & f, SupportPtr s, const std::vector<int> & var_color, int clause_color) -> ColoredGraph
    {
        Builder b(std::move(s));
        std::vector<int> v_node;
        for (std::size_t v = 0; v < f.names.size(); ++v) {
            auto & n = f.names[v];
            auto color = var_color[v];
            auto x = b.concept_node("qx_" + n, "X_" + n, {}, color);
            v_node.push_back(b.concept_node("qv_" + n, "V_" + n, {}, color));
            b.relation_node("qval_" + n, "val", {x, v_node.back()}, color);
        }
        for (std::size_t i = 0; i < f.clauses.size(); ++i) {
            std::vector<int> args;
            for (auto & l : f.clauses[i])
                args.push_back(v_node[static_cast<std::size_t>(l.var)]);
            b.relation_node("qc" + std::to_string(i + 1), "C" + std::to_string(i + 1), args, clause_color);
        }
        return b.colored();
    }

    auto csp_support(const MixedCsp & p) -> SupportPtr
    {
        SupportDeclarations d;
        for (auto & v : p.variables) {
            d.concepts.push_back({"D_" + v.name, {}});
            for (auto & value : v.domain)
                d.individuals.push_back({v.name + "." + value, "D_" + v.name});
        }
        for (auto & c : p.constraints)
            d.relations.push_back({c.name, static_cast<int>(c.scope.size()), {}});
        return Support::validate(d);
    }

    auto csp_target(const MixedCsp & p, SupportPtr s) -> SimpleGraph
    {
        Builder b(std::move(s));
        std::vector<std::vector<int>> value_node(p.variables.size());
        for (std::size_t v = 0; v < p.variables.size(); ++v) {
            auto & var = p.variables[v];
            for (std::size_t i = 0; i < var.domain.size(); ++i)
                value_node[v].push_back(b.concept_node("v_" + var.name + "_" + std::to_string(i), "D_" + var.name,
                    var.name + "." + var.domain[i]));
        }
        for (auto & c : p.constraints) {
            for (std::size_t j = 0; j < c.tuples.size(); ++j) {
                std::vector<int> args;
                for (std::size_t pos = 0; pos < c.scope.size(); ++pos)
                    args.push_back(value_node[static_cast<std::size_t>(c.scope[pos])][static_cast<std::size_t>(c.tuples[j][pos])]);
                b.relation_node("t_" + c.name + "_" + std::to_string(j), c.name, args);
            }
        }
        return b.graph();
    }

    auto csp_query(const MixedCsp & p, SupportPtr s) -> ColoredGraph
    {
        Builder b(std::move(s));
        std::vector<int> node;
        for (auto & v : p.variables)
            node.push_back(b.concept_node("q_" + v.name, "D_" + v.name, {}, v.uncontrollable ? 0 : 1));
        for (auto & c : p.constraints) {
            std::vector<int> args;
            bool inside = true;
            for (auto v : c.scope) {
                args.push_back(node[static_cast<std::size_t>(v)]);
                inside = inside && p.variables[static_cast<std::size_t>(v)].uncontrollable;
            }
            b.relation_node("q_" + c.name, c.name, args, inside ? 0 : 1);
        }
        return b.colored();
    }

    auto fresh_type_name(const Support & s, std::string name) -> std::string
    {
        while (s.find_concept(name) || ! s.relations_named(name).empty() || s.find_marker(name))
            name += "_";
        return name;
    }
}

void validate(const CnfFormula & f, int blocks)
{
    std::vector<std::string> diags;
    std::set<std::string> seen;
    for (auto & n : f.names) {
        if (! plain_name(n))
            diags.push_back("variable name '" + n + "' is not a plain name");
        if (! seen.insert(n).second)
            diags.push_back("duplicate variable '" + n + "'");
    }
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        auto & c = f.clauses[i];
        auto where = "clause " + std::to_string(i + 1);
        if (c.empty() || c.size() > 3)
            diags.push_back(where + " has " + std::to_string(c.size()) + " literals; 1 to 3 allowed");
        std::set<int> vars;
        for (auto & l : c) {
            if (l.var < 0 || l.var >= f.variables())
                diags.push_back(where + " refers to unknown variable " + std::to_string(l.var));
            else if (! vars.insert(l.var).second)
                diags.push_back(where + " repeats variable '" + f.names[static_cast<std::size_t>(l.var)] + "'");
        }
    }
    if (blocks > 0) {
        if (f.block.size() != f.names.size())
            diags.emplace_back("partition does not cover every variable");
        else
            for (std::size_t v = 0; v < f.block.size(); ++v)
                if (f.block[v] < 0 || f.block[v] >= blocks)
                    diags.push_back("variable '" + f.names[v] + "' is in block " + std::to_string(f.block[v]) + " of " + std::to_string(blocks));
    }
    if (! diags.empty())
        throw ValidationError(std::move(diags));
}

void validate(const MixedCsp & p)
{
    std::vector<std::string> diags;
    std::set<std::string> names;
    for (auto & v : p.variables) {
        if (! plain_name(v.name))
            diags.push_back("variable name '" + v.name + "' is not a plain name");
        if (! names.insert(v.name).second)
            diags.push_back("duplicate variable '" + v.name + "'");
        if (v.domain.empty())
            diags.push_back("variable '" + v.name + "' has an empty domain");
        std::set<std::string> values;
        for (auto & value : v.domain) {
            if (! plain_name(value))
                diags.push_back("value '" + value + "' of '" + v.name + "' is not a plain name");
            if (! values.insert(value).second)
                diags.push_back("variable '" + v.name + "' repeats value '" + value + "'");
        }
    }
    std::set<std::string> constraint_names;
    for (auto & c : p.constraints) {
        if (! plain_name(c.name))
            diags.push_back("constraint name '" + c.name + "' is not a plain name");
        if (! constraint_names.insert(c.name).second || names.contains(c.name))
            diags.push_back("constraint name '" + c.name + "' is already used");
        if (c.scope.empty())
            diags.push_back("constraint '" + c.name + "' has an empty scope");
        bool scope_ok = true;
        for (auto v : c.scope) {
            if (v < 0 || v >= static_cast<int>(p.variables.size())) {
                diags.push_back("constraint '" + c.name + "' refers to unknown variable " + std::to_string(v));
                scope_ok = false;
            }
        }
        if (! scope_ok)
            continue;
        for (auto & t : c.tuples) {
            if (t.size() != c.scope.size()) {
                diags.push_back("constraint '" + c.name + "' has a tuple of the wrong length");
                continue;
            }
            for (std::size_t pos = 0; pos < t.size(); ++pos) {
                auto & var = p.variables[static_cast<std::size_t>(c.scope[pos])];
                if (t[pos] < 0 || t[pos] >= static_cast<int>(var.domain.size()))
                    diags.push_back("constraint '" + c.name + "' has a value outside the domain of '" + var.name + "'");
            }
        }
    }
    if (! diags.empty())
        throw ValidationError(std::move(diags));
}

void validate(const SemiThueSystem & s)
{
    std::vector<std::string> diags;
    auto word = [&](const std::string & w, const std::string & what) {
        if (w.empty())
            diags.push_back(what + " is empty");
        for (unsigned char ch : w)
            if (! std::isalnum(ch))
                diags.push_back(what + " has a letter that is not alphanumeric");
    };
    word(s.source, "source word");
    word(s.target, "target word");
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        word(s.rules[i].first, "left side of rule " + std::to_string(i + 1));
        word(s.rules[i].second, "right side of rule " + std::to_string(i + 1));
    }
    if (! diags.empty())
        throw ValidationError(std::move(diags));
}

auto gen_sat3_projection(const CnfFormula & f) -> ProjectionInstance
{
    validate(f);
    auto s = sat_support(f);
    auto q = sat_query(f, s, std::vector<int>(f.names.size(), 0), 0);
    return {q.graph, sat_target(f, s, std::vector<char>(f.names.size(), 1))};
}

auto gen_sat3_2c_sgc(const CnfFormula & f) -> ConsistencyInstance
{
    validate(f, 2);
    auto s = sat_support(f);
    auto c = sat_query(f, s, f.block, 1);
    return {sat_target(f, s, std::vector<char>(f.names.size(), 1)), Constraint("sat", c, Polarity::positive)};
}

auto gen_sat3_3_sec(const CnfFormula & f) -> DeductionInstance
{
    validate(f, 3);
    auto s = sat_support(f);
    std::vector<char> linked(f.names.size());
    std::vector<int> color(f.names.size());
    for (std::size_t v = 0; v < f.names.size(); ++v) {
        linked[v] = f.block[v] != 0;
        color[v] = f.block[v] == 2 ? 1 : 0;
    }
    auto facts = sat_target(f, s, linked);

    Builder choose(s), goal(s);
    for (std::size_t v = 0; v < f.names.size(); ++v) {
        if (f.block[v] != 0)
            continue;
        auto & n = f.names[v];
        auto x = choose.concept_node("ex_" + n, "X_" + n);
        auto value = choose.concept_node("ev_" + n, "V_" + n);
        choose.relation_node("eval_" + n, "val", {x, value}, 1);
        auto gx = goal.concept_node("gx_" + n, "X_" + n);
        auto gv = goal.concept_node("gv_" + n, "V_" + n);
        goal.relation_node("gval_" + n, "val", {gx, gv});
    }
    Rule evolve("choose", choose.colored());
    Constraint check("sat", sat_query(f, s, color, 1), Polarity::positive);
    return {make_kb(s, facts, {}, {evolve}, {check}), goal.graph()};
}

auto gen_word_problem_sr(const SemiThueSystem & st) -> DeductionInstance
{
    validate(st);
    std::set<char> letters;
    for (auto * w : {&st.source, &st.target})
        letters.insert(w->begin(), w->end());
    for (auto & [a, b] : st.rules) {
        letters.insert(a.begin(), a.end());
        letters.insert(b.begin(), b.end());
    }
    SupportDeclarations d;
    d.concepts.push_back({"T", {}});
    d.concepts.push_back({"B", {"T"}});
    d.concepts.push_back({"E", {"T"}});
    for (auto ch : letters)
        d.concepts.push_back({std::string("L_") + ch, {"T"}});
    d.relations.push_back({"s", 2, {}});
    auto s = Support::validate(d);

    auto path = [&](const std::string & word, const std::string & prefix) {
        Builder b(s);
        auto prev = b.concept_node(prefix + "b", "B");
        for (std::size_t i = 0; i < word.size(); ++i) {
            auto next = b.concept_node(prefix + std::to_string(i + 1), std::string("L_") + word[i]);
            b.relation_node(prefix + "s" + std::to_string(i + 1), "s", {prev, next});
            prev = next;
        }
        auto end = b.concept_node(prefix + "e", "E");
        b.relation_node(prefix + "s" + std::to_string(word.size() + 1), "s", {prev, end});
        return b.graph();
    };

    std::vector<Rule> rules;
    for (std::size_t i = 0; i < st.rules.size(); ++i) {
        auto & [lhs, rhs] = st.rules[i];
        Builder b(s);
        auto from = b.concept_node("h0", "T");
        auto prev = from;
        for (std::size_t j = 0; j < lhs.size(); ++j) {
            auto next = b.concept_node("h" + std::to_string(j + 1), std::string("L_") + lhs[j]);
            b.relation_node("hs" + std::to_string(j + 1), "s", {prev, next});
            prev = next;
        }
        auto to = b.concept_node("h" + std::to_string(lhs.size() + 1), "T");
        b.relation_node("hs" + std::to_string(lhs.size() + 1), "s", {prev, to});
        prev = from;
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            auto next = b.concept_node("z" + std::to_string(j + 1), std::string("L_") + rhs[j], {}, 1);
            b.relation_node("zs" + std::to_string(j + 1), "s", {prev, next}, 1);
            prev = next;
        }
        b.relation_node("zs" + std::to_string(rhs.size() + 1), "s", {prev, to}, 1);
        rules.emplace_back("U" + std::to_string(i + 1), b.colored());
    }
    return {make_kb(s, path(st.source, "m"), rules), path(st.target, "g")};
}

auto gen_sgc_to_sec(const SimpleGraph & g, const Constraint & c) -> DeductionInstance
{
    if (c.polarity() != Polarity::positive)
        throw PreconditionError("constraint '" + c.id() + "' is not positive");
    auto & body = c.body();
    auto & k = body.graph;
    std::vector<int> frontier;
    for (int x = 0; x < k.concept_count(); ++x) {
        if (! body.concept_colored(x, 0))
            continue;
        bool on_frontier = false;
        for (auto [r, pos] : k.incidence(x))
            on_frontier = on_frontier || body.relation_colored(r, 1);
        if (on_frontier)
            frontier.push_back(x);
    }
    auto & sup = g.support();
    if (frontier.empty())
        throw PreconditionError("constraint '" + c.id() + "' has no frontier; the found relation needs arity at least 1");
    if (static_cast<int>(frontier.size()) > sup.max_arity())
        throw PreconditionError("constraint '" + c.id() + "' has a frontier of " + std::to_string(frontier.size()) +
            " nodes, above the maximum arity " + std::to_string(sup.max_arity()));

    auto decls = sup.declarations();
    auto found = fresh_type_name(sup, "found");
    auto arity = static_cast<int>(frontier.size());
    decls.relations.push_back({found, arity, {}});
    auto s = Support::validate(decls);

    auto start = irredundant_form(is_normal(g) ? g : normal_form(g)).graph;
    auto facts = validate_graph(to_raw(start), s);
    auto raw = to_raw(k);
    auto copy = validate_graph(raw, s, true);
    auto found_id = copy.fresh_id("found");

    // E(C): the trigger, concluding found on the frontier
    Builder evolve(s), negative(s), goal(s);
    std::vector<int> in_evolve(static_cast<std::size_t>(k.concept_count()), -1);
    std::vector<int> in_negative(in_evolve.size(), -1);
    std::vector<int> frontier_evolve, frontier_negative, frontier_goal;
    for (int x = 0; x < k.concept_count(); ++x) {
        auto & rc = raw.concepts[static_cast<std::size_t>(x)];
        bool on_frontier = std::find(frontier.begin(), frontier.end(), x) != frontier.end();
        if (body.concept_colored(x, 0))
            in_evolve[static_cast<std::size_t>(x)] = evolve.concept_node(rc.id, rc.type, rc.marker, 0);
        if (on_frontier || body.concept_colored(x, 1))
            in_negative[static_cast<std::size_t>(x)] = negative.concept_node(rc.id, rc.type, rc.marker, on_frontier ? 0 : 1);
    }
    for (auto x : frontier) {
        auto & rc = raw.concepts[static_cast<std::size_t>(x)];
        frontier_evolve.push_back(in_evolve[static_cast<std::size_t>(x)]);
        frontier_negative.push_back(in_negative[static_cast<std::size_t>(x)]);
        frontier_goal.push_back(goal.concept_node(rc.id, rc.type, rc.marker));
    }
    for (int r = 0; r < k.relation_count(); ++r) {
        auto & rr = k.relation_at(r);
        auto & type = k.support().relations().name(rr.type);
        auto & into = body.relation_colored(r, 0) ? in_evolve : in_negative;
        std::vector<int> args;
        for (auto a : rr.args)
            args.push_back(into[static_cast<std::size_t>(a)]);
        if (body.relation_colored(r, 0))
            evolve.relation_node(rr.id, type, args, 0);
        else
            negative.relation_node(rr.id, type, args, 1);
    }
    evolve.relation_node(found_id, found, frontier_evolve, 1);
    negative.relation_node(found_id, found, frontier_negative, 0);
    goal.relation_node(found_id, found, frontier_goal);

    Rule e("E_" + c.id(), evolve.colored());
    Constraint neg("N_" + c.id(), negative.colored(), Polarity::negative);
    return {make_kb(s, facts, {}, {e}, {neg}), goal.graph()};
}

auto csp_to_projection(const MixedCsp & p) -> ProjectionInstance
{
    validate(p);
    for (auto & v : p.variables)
        if (v.uncontrollable)
            throw PreconditionError("variable '" + v.name + "' is uncontrollable; use mixed_to_sgc");
    auto s = csp_support(p);
    return {csp_query(p, s).graph, csp_target(p, s)};
}

auto mixed_to_sgc(const MixedCsp & p) -> ConsistencyInstance
{
    validate(p);
    auto s = csp_support(p);
    return {csp_target(p, s), Constraint("mixed", csp_query(p, s), Polarity::positive)};
}

auto random_cnf(std::mt19937_64 & rng, int variables, int clauses, int blocks) -> CnfFormula
{
    CnfFormula f;
    for (int v = 0; v < variables; ++v) {
        f.names.push_back("v" + std::to_string(v + 1));
        if (blocks > 0)
            f.block.push_back(v % blocks);
    }
    if (variables == 0)
        return f;
    std::uniform_int_distribution<int> width(1, std::min(3, variables));
    std::bernoulli_distribution sign(0.5);
    std::vector<int> order(static_cast<std::size_t>(variables));
    for (int v = 0; v < variables; ++v)
        order[static_cast<std::size_t>(v)] = v;
    for (int i = 0; i < clauses; ++i) {
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Literal> clause;
        auto w = width(rng);
        for (int j = 0; j < w; ++j)
            clause.push_back({order[static_cast<std::size_t>(j)], sign(rng)});
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

auto random_csp(std::mt19937_64 & rng, int variables, int max_domain, int constraints, int uncontrollable) -> MixedCsp
{
    MixedCsp p;
    std::uniform_int_distribution<int> domain(1, std::max(1, max_domain));
    for (int v = 0; v < variables; ++v) {
        MixedCsp::Variable var;
        var.uncontrollable = v < uncontrollable;
        var.name = (var.uncontrollable ? "l" : "x") + std::to_string(v + 1);
        auto size = domain(rng);
        for (int i = 0; i < size; ++i)
            var.domain.push_back(std::to_string(i + 1));
        p.variables.push_back(std::move(var));
    }
    if (variables == 0)
        return p;
    std::uniform_int_distribution<int> pick(0, variables - 1);
    std::bernoulli_distribution keep(0.5);
    for (int i = 0; i < constraints; ++i) {
        MixedCsp::Relation c;
        c.name = "c" + std::to_string(i + 1);
        c.scope.push_back(pick(rng));
        if (variables > 1 && keep(rng)) {
            int other = pick(rng);
            while (other == c.scope.front())
                other = pick(rng);
            c.scope.push_back(other);
        }
        std::vector<int> tuple(c.scope.size(), 0);
        // odometer over the scope's domains
        while (true) {
            if (keep(rng))
                c.tuples.push_back(tuple);
            std::size_t pos = 0;
            for (; pos < tuple.size(); ++pos) {
                auto size = static_cast<int>(p.variables[static_cast<std::size_t>(c.scope[pos])].domain.size());
                if (++tuple[pos] < size)
                    break;
                tuple[pos] = 0;
            }
            if (pos == tuple.size())
                break;
        }
        p.constraints.push_back(std::move(c));
    }
    return p;
}

auto random_semi_thue(std::mt19937_64 & rng, int alphabet, int rules, int max_length) -> SemiThueSystem
{
    std::uniform_int_distribution<int> letter(0, std::max(1, alphabet) - 1);
    std::uniform_int_distribution<int> length(1, std::max(1, max_length));
    auto word = [&] {
        std::string w;
        for (int n = length(rng); n > 0; --n)
            w += static_cast<char>('a' + letter(rng));
        return w;
    };
    SemiThueSystem s;
    for (int i = 0; i < rules; ++i) {
        auto lhs = word();
        s.rules.emplace_back(lhs, word());
    }
    s.source = word();
    s.target = word();
    return s;
}

} // namespace cgr
