#include <cgr/error.hpp>
#include <cgr/logic.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace cgr {

namespace {
    auto atom_text(const Atom & a) -> std::string
    {
        std::string s = a.predicate + "(";
        for (std::size_t i = 0; i < a.args.size(); ++i)
            s += (i ? "," : "") + a.args[i].name;
        return s + ")";
    }

    auto conjunction(const std::vector<Atom> & atoms) -> std::string
    {
        std::set<std::string> sorted;
        for (auto & a : atoms)
            sorted.insert(atom_text(a));
        if (sorted.empty())
            return "true";
        std::string s;
        for (auto & a : sorted)
            s += (s.empty() ? "" : " & ") + a;
        return s;
    }

    auto quantified(const std::string & q, const std::vector<std::string> & vars, const std::string & body) -> std::string
    {
        if (vars.empty())
            return body;
        std::string s = q;
        for (auto & v : vars)
            s += " " + v;
        return s + " (" + body + ")";
    }

    // Terms for the concept nodes selected by `keep`, variables named
    // <prefix>1, <prefix>2, ... in identifier order.
    auto name_terms(const SimpleGraph & g, const std::vector<char> & keep, const std::string & prefix,
        std::vector<Term> & terms, std::vector<std::string> & vars)
    {
        std::vector<int> generic;
        for (int c = 0; c < g.concept_count(); ++c) {
            if (! keep[static_cast<std::size_t>(c)])
                continue;
            auto & label = g.concept_at(c).label;
            if (label.is_generic())
                generic.push_back(c);
            else
                terms[static_cast<std::size_t>(c)] = {g.support().marker_name(label.marker), false};
        }
        std::sort(generic.begin(), generic.end(), [&](int a, int b) { return g.concept_at(a).id < g.concept_at(b).id; });
        for (auto c : generic) {
            vars.push_back(prefix + std::to_string(vars.size() + 1));
            terms[static_cast<std::size_t>(c)] = {vars.back(), true};
        }
    }

    auto concept_atom(const SimpleGraph & g, const std::vector<Term> & terms, int c) -> Atom
    {
        return {g.support().concepts().name(g.concept_at(c).label.type), {terms[static_cast<std::size_t>(c)]}};
    }

    auto relation_atom(const SimpleGraph & g, const std::vector<Term> & terms, int r) -> Atom
    {
        auto & rel = g.relation_at(r);
        Atom a{g.support().relations().name(rel.type), {}};
        for (auto c : rel.args)
            a.args.push_back(terms[static_cast<std::size_t>(c)]);
        return a;
    }

    auto only_concept(const Support & s) -> std::string
    {
        std::vector<std::string> names;
        for (std::size_t t = 0; t < s.concepts().size(); ++t)
            if (static_cast<TypeId>(t) != s.not_there())
                names.push_back(s.concepts().name(static_cast<TypeId>(t)));
        if (names.size() != 1)
            throw PreconditionError("support is not flat");
        return names.front();
    }
}

auto to_text(const FolFormula & f) -> std::string
{
    auto conclusion = quantified("exists", f.existential, conjunction(f.atoms));
    if (f.is_fact())
        return conclusion;
    return quantified("forall", f.universal, conjunction(f.premise) + " -> " + conclusion);
}

auto phi_support(const Support & s) -> std::vector<FolFormula>
{
    std::map<std::string, FolFormula> sorted;
    auto add = [&](const TypeHierarchy & h, int arity, TypeId a, TypeId b) {
        FolFormula f;
        std::vector<Term> args;
        for (int i = 1; i <= arity; ++i) {
            f.universal.push_back("x" + std::to_string(i));
            args.push_back({f.universal.back(), true});
        }
        f.premise.push_back({h.name(a), args});
        f.atoms.push_back({h.name(b), args});
        sorted.emplace(to_text(f), std::move(f));
    };
    auto & cs = s.concepts();
    for (std::size_t a = 0; a < cs.size(); ++a)
        for (std::size_t b = 0; b < cs.size(); ++b)
            if (a != b && cs.leq(static_cast<TypeId>(a), static_cast<TypeId>(b)))
                add(cs, 1, static_cast<TypeId>(a), static_cast<TypeId>(b));
    auto & rs = s.relations();
    for (std::size_t a = 0; a < rs.size(); ++a)
        for (std::size_t b = 0; b < rs.size(); ++b)
            if (a != b && rs.leq(static_cast<TypeId>(a), static_cast<TypeId>(b)))
                add(rs, s.arity(static_cast<TypeId>(a)), static_cast<TypeId>(a), static_cast<TypeId>(b));
    std::vector<FolFormula> result;
    for (auto & [text, f] : sorted)
        result.push_back(std::move(f));
    return result;
}

auto phi_graph(const SimpleGraph & g) -> FolFormula
{
    FolFormula f;
    std::vector<Term> terms(static_cast<std::size_t>(g.concept_count()));
    name_terms(g, std::vector<char>(terms.size(), 1), "x", terms, f.existential);
    for (int c = 0; c < g.concept_count(); ++c)
        f.atoms.push_back(concept_atom(g, terms, c));
    for (int r = 0; r < g.relation_count(); ++r)
        f.atoms.push_back(relation_atom(g, terms, r));
    return f;
}

auto phi_rule(const ColoredGraph & r) -> FolFormula
{
    auto & g = r.graph;
    std::vector<char> zero(static_cast<std::size_t>(g.concept_count())), one(zero.size());
    bool has_hypothesis = false;
    for (int c = 0; c < g.concept_count(); ++c) {
        zero[static_cast<std::size_t>(c)] = r.concept_colored(c, 0);
        one[static_cast<std::size_t>(c)] = r.concept_colored(c, 1);
        has_hypothesis = has_hypothesis || r.concept_colored(c, 0);
    }
    if (! has_hypothesis)
        return phi_graph(g);

    FolFormula f;
    std::vector<Term> terms(zero.size());
    name_terms(g, zero, "x", terms, f.universal);
    name_terms(g, one, "y", terms, f.existential);
    for (int c = 0; c < g.concept_count(); ++c)
        (r.concept_colored(c, 0) ? f.premise : f.atoms).push_back(concept_atom(g, terms, c));
    for (int x = 0; x < g.relation_count(); ++x)
        (r.relation_colored(x, 0) ? f.premise : f.atoms).push_back(relation_atom(g, terms, x));
    return f;
}

auto vocabulary(const std::vector<FolFormula> & fs, const std::string & top) -> SupportPtr
{
    std::set<std::pair<std::string, int>> predicates;
    std::set<std::string> constants;
    for (auto & f : fs) {
        for (auto * atoms : {&f.premise, &f.atoms}) {
            for (auto & a : *atoms) {
                if (! (a.predicate == top && a.args.size() == 1))
                    predicates.emplace(a.predicate, static_cast<int>(a.args.size()));
                for (auto & t : a.args)
                    if (! t.variable)
                        constants.insert(t.name);
            }
        }
    }
    return flat_support({predicates.begin(), predicates.end()}, {constants.begin(), constants.end()}, top);
}

auto f2g(const FolFormula & f, SupportPtr support) -> SimpleGraph
{
    if (! f.is_fact())
        throw PreconditionError("f2g needs an existential conjunction, not a rule");
    if (! support)
        support = vocabulary({f});
    auto top_name = only_concept(*support);
    auto top = *support->find_concept(top_name);
    SimpleGraph g(support);

    std::set<std::string> variables(f.existential.begin(), f.existential.end());
    auto node = [&](const Term & t) -> int {
        if (auto c = g.find_concept(t.name)) {
            if (g.concept_at(*c).label.is_generic() != t.variable)
                throw PreconditionError("term '" + t.name + "' is used both as a variable and as a constant");
            return *c;
        }
        if (t.variable) {
            if (! variables.contains(t.name))
                throw PreconditionError("variable '" + t.name + "' is not quantified");
            return g.add_concept(t.name, {top, generic_marker});
        }
        auto m = support->find_marker(t.name);
        if (! m)
            throw PreconditionError("constant '" + t.name + "' is not in the support");
        return g.add_concept(t.name, {top, *m});
    };

    for (auto & v : f.existential)
        node({v, true});
    for (auto & a : f.atoms)
        for (auto & t : a.args)
            node(t);
    for (auto & a : f.atoms) {
        std::vector<int> args;
        for (auto & t : a.args)
            args.push_back(node(t));
        if (a.predicate == top_name && args.size() == 1)
            continue;
        auto type = support->find_relation(a.predicate, static_cast<int>(args.size()));
        if (! type)
            throw PreconditionError("predicate '" + a.predicate + "/" + std::to_string(args.size()) + "' is not in the support");
        g.add_relation(g.fresh_id("r"), *type, std::move(args));
    }
    return g;
}

auto expansion_support(const Support & s) -> SupportPtr
{
    std::set<std::string> taken;
    std::vector<std::pair<std::string, int>> predicates;
    for (std::size_t t = 0; t < s.concepts().size(); ++t) {
        taken.insert(s.concepts().name(static_cast<TypeId>(t)));
        if (static_cast<TypeId>(t) != s.not_there())
            predicates.emplace_back(s.concepts().name(static_cast<TypeId>(t)), 1);
    }
    for (std::size_t t = 0; t < s.relations().size(); ++t) {
        taken.insert(s.relations().name(static_cast<TypeId>(t)));
        predicates.emplace_back(s.relations().name(static_cast<TypeId>(t)), s.arity(static_cast<TypeId>(t)));
    }
    std::vector<std::string> constants;
    for (std::size_t m = 0; m < s.marker_count(); ++m) {
        constants.push_back(s.marker_name(static_cast<MarkerId>(m)));
        taken.insert(constants.back());
    }
    std::string top = "Top";
    while (taken.contains(top))
        top += "_";
    return flat_support(predicates, constants, top);
}

auto expand(const SimpleGraph & g) -> SimpleGraph
{
    auto & s = g.support();
    auto flat = expansion_support(s);
    auto top = *flat->find_concept(only_concept(*flat));
    SimpleGraph h(flat);
    auto edge_id = [&](const std::string & id, const std::string & type) {
        auto wanted = id + "^" + type;
        return h.has_id(wanted) ? h.fresh_id(wanted + "~") : wanted;
    };

    for (auto & c : g.concepts()) {
        if (c.label.type == s.not_there())
            throw PreconditionError("node '" + c.id + "' uses the reserved type");
        auto marker = c.label.is_generic() ? generic_marker : *flat->find_marker(s.marker_name(c.label.marker));
        h.add_concept(c.id, {top, marker});
    }
    for (int c = 0; c < g.concept_count(); ++c) {
        for (auto t : s.concepts().supertypes(g.concept_at(c).label.type)) {
            auto & name = s.concepts().name(t);
            h.add_relation(edge_id(g.concept_at(c).id, name), *flat->find_relation(name, 1), {c});
        }
    }
    for (auto & r : g.relations()) {
        for (auto t : s.relations().supertypes(r.type)) {
            auto & name = s.relations().name(t);
            h.add_relation(edge_id(r.id, name), *flat->find_relation(name, s.arity(t)), r.args);
        }
    }
    return h;
}

auto g2f(const SimpleGraph & g) -> FolFormula
{
    return phi_graph(expand(g));
}

} // namespace cgr
