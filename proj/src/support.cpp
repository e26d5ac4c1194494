#include <cgr/error.hpp>
#include <cgr/support.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace cgr {

ValidationError::ValidationError(std::vector<std::string> diagnostics) :
    Error([&] {
        std::string msg = "validation failed";
        for (auto & d : diagnostics)
            msg += "\n  " + d;
        return msg;
    }()),
    diagnostics_(std::move(diagnostics))
{
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string & message) :
    Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
    line_(line),
    column_(column)
{
}

auto fnv1a(std::string_view text, std::uint64_t seed) -> std::uint64_t
{
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

TypeHierarchy::TypeHierarchy(std::vector<std::string> names, std::vector<std::vector<TypeId>> parents) :
    names_(std::move(names)),
    parents_(std::move(parents))
{
    const auto n = names_.size();
    parents_.resize(n);

    // Kahn's algorithm over child -> parent edges; leftovers sit on a cycle.
    std::vector<int> pending(n, 0);
    std::vector<std::vector<TypeId>> children(n);
    for (std::size_t c = 0; c < n; ++c)
        for (auto p : parents_[c]) {
            ++pending[c];
            children[static_cast<std::size_t>(p)].push_back(static_cast<TypeId>(c));
        }
    std::vector<TypeId> order;
    for (std::size_t t = 0; t < n; ++t)
        if (pending[t] == 0)
            order.push_back(static_cast<TypeId>(t));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto c : children[static_cast<std::size_t>(order[i])])
            if (--pending[static_cast<std::size_t>(c)] == 0)
                order.push_back(c);
    if (order.size() != n) {
        std::vector<std::string> diags;
        for (std::size_t t = 0; t < n; ++t)
            if (pending[t] != 0)
                diags.push_back("cycle in order edges through type '" + names_[t] + "'");
        throw ValidationError(std::move(diags));
    }

    // order lists supertypes before subtypes
    closure_.assign(n * n, 0);
    for (auto t : order) {
        auto row = static_cast<std::size_t>(t) * n;
        closure_[row + static_cast<std::size_t>(t)] = 1;
        for (auto p : parents_[static_cast<std::size_t>(t)]) {
            auto prow = static_cast<std::size_t>(p) * n;
            for (std::size_t j = 0; j < n; ++j)
                closure_[row + j] |= closure_[prow + j];
        }
    }
}

auto TypeHierarchy::supertypes(TypeId t) const -> std::vector<TypeId>
{
    std::vector<TypeId> result;
    for (std::size_t j = 0; j < names_.size(); ++j)
        if (leq(t, static_cast<TypeId>(j)))
            result.push_back(static_cast<TypeId>(j));
    return result;
}

namespace {
    auto relation_key_of(std::string_view name, int arity) -> std::string
    {
        return std::string(name) + "/" + std::to_string(arity);
    }
}

auto Support::validate(const SupportDeclarations & decls) -> std::shared_ptr<const Support>
{
    std::vector<std::string> diags;
    std::shared_ptr<Support> s(new Support());
    s->decls_ = decls;
    s->max_arity_ = decls.max_arity;

    std::set<std::string> concept_names, relation_names, marker_names;

    // concepts, plus the reserved one at the end
    std::vector<std::string> cnames;
    for (auto & c : decls.concepts) {
        if (c.name == not_there_type)
            diags.push_back("concept type '" + c.name + "' is reserved");
        else if (! concept_names.insert(c.name).second)
            diags.push_back("duplicate concept type '" + c.name + "'");
        else {
            s->concept_index_.emplace(c.name, static_cast<TypeId>(cnames.size()));
            cnames.push_back(c.name);
        }
    }
    s->not_there_ = static_cast<TypeId>(cnames.size());
    s->concept_index_.emplace(std::string(not_there_type), s->not_there_);
    cnames.emplace_back(not_there_type);

    std::vector<std::vector<TypeId>> cparents(cnames.size());
    for (auto & c : decls.concepts) {
        auto it = s->concept_index_.find(c.name);
        if (it == s->concept_index_.end() || it->second == s->not_there_)
            continue;
        for (auto & p : c.parents) {
            auto pit = s->concept_index_.find(p);
            if (pit == s->concept_index_.end() || pit->second == s->not_there_)
                diags.push_back("concept type '" + c.name + "' has unknown parent '" + p + "'");
            else if (std::find(cparents[static_cast<std::size_t>(it->second)].begin(),
                         cparents[static_cast<std::size_t>(it->second)].end(), pit->second)
                == cparents[static_cast<std::size_t>(it->second)].end())
                cparents[static_cast<std::size_t>(it->second)].push_back(pit->second);
        }
    }

    // relations
    std::vector<std::string> rnames;
    for (auto & r : decls.relations) {
        auto key = relation_key_of(r.name, r.arity);
        if (r.arity < 1 || r.arity > decls.max_arity)
            diags.push_back("relation type '" + key + "' has arity outside 1.." + std::to_string(decls.max_arity));
        else if (s->relation_index_.contains(key))
            diags.push_back("duplicate relation type '" + key + "'");
        else {
            s->relation_index_.emplace(key, static_cast<TypeId>(rnames.size()));
            rnames.push_back(r.name);
            s->arities_.push_back(r.arity);
            relation_names.insert(r.name);
        }
    }
    std::vector<std::vector<TypeId>> rparents(rnames.size());
    for (auto & r : decls.relations) {
        auto it = s->relation_index_.find(relation_key_of(r.name, r.arity));
        if (it == s->relation_index_.end())
            continue;
        for (auto & [pname, parity] : r.parents) {
            if (parity != r.arity) {
                diags.push_back("relation type '" + relation_key_of(r.name, r.arity) + "' cannot be below '"
                    + relation_key_of(pname, parity) + "': distinct arities are incomparable");
                continue;
            }
            auto pit = s->relation_index_.find(relation_key_of(pname, parity));
            if (pit == s->relation_index_.end())
                diags.push_back("relation type '" + relation_key_of(r.name, r.arity) + "' has unknown parent '"
                    + relation_key_of(pname, parity) + "'");
            else {
                auto & ps = rparents[static_cast<std::size_t>(it->second)];
                if (std::find(ps.begin(), ps.end(), pit->second) == ps.end())
                    ps.push_back(pit->second);
            }
        }
    }

    // markers
    for (auto & i : decls.individuals) {
        if (! marker_names.insert(i.marker).second) {
            diags.push_back("duplicate individual marker '" + i.marker + "'");
            continue;
        }
        auto t = s->concept_index_.find(i.type);
        if (i.type.empty() || t == s->concept_index_.end() || t->second == s->not_there_) {
            diags.push_back("individual marker '" + i.marker + "' has no valid type (tau undefined)");
            continue;
        }
        s->marker_index_.emplace(i.marker, static_cast<MarkerId>(s->markers_.size()));
        s->markers_.push_back(i.marker);
        s->tau_.push_back(t->second);
    }

    for (auto & n : concept_names)
        if (relation_names.contains(n))
            diags.push_back("name '" + n + "' is both a concept type and a relation type");
    for (auto & n : marker_names) {
        if (concept_names.contains(n) || n == not_there_type)
            diags.push_back("name '" + n + "' is both a marker and a concept type");
        if (relation_names.contains(n))
            diags.push_back("name '" + n + "' is both a marker and a relation type");
    }

    // cycles are reported alongside every other diagnostic
    auto build = [&diags](std::vector<std::string> names, std::vector<std::vector<TypeId>> parents, TypeHierarchy & out) {
        try {
            out = TypeHierarchy(std::move(names), std::move(parents));
        }
        catch (const ValidationError & e) {
            diags.insert(diags.end(), e.diagnostics().begin(), e.diagnostics().end());
        }
    };
    build(std::move(cnames), std::move(cparents), s->concepts_);
    build(std::move(rnames), std::move(rparents), s->relations_);

    if (! diags.empty())
        throw ValidationError(std::move(diags));

    std::ostringstream canon;
    for (auto & c : decls.concepts) {
        canon << "c " << c.name;
        for (auto & p : c.parents)
            canon << " " << p;
        canon << "\n";
    }
    for (auto & r : decls.relations) {
        canon << "r " << r.name << "/" << r.arity;
        for (auto & [p, a] : r.parents)
            canon << " " << p << "/" << a;
        canon << "\n";
    }
    for (auto & i : decls.individuals)
        canon << "i " << i.marker << " " << i.type << "\n";
    canon << "max " << decls.max_arity;
    s->fingerprint_ = fnv1a(canon.str());
    return s;
}

auto Support::find_concept(std::string_view name) const -> std::optional<TypeId>
{
    auto it = concept_index_.find(std::string(name));
    if (it == concept_index_.end())
        return std::nullopt;
    return it->second;
}

auto Support::find_relation(std::string_view name, int arity) const -> std::optional<TypeId>
{
    auto it = relation_index_.find(relation_key_of(name, arity));
    if (it == relation_index_.end())
        return std::nullopt;
    return it->second;
}

auto Support::relations_named(std::string_view name) const -> std::vector<TypeId>
{
    std::vector<TypeId> result;
    for (std::size_t t = 0; t < relations_.size(); ++t)
        if (relations_.name(static_cast<TypeId>(t)) == name)
            result.push_back(static_cast<TypeId>(t));
    return result;
}

auto Support::find_marker(std::string_view name) const -> std::optional<MarkerId>
{
    auto it = marker_index_.find(std::string(name));
    if (it == marker_index_.end())
        return std::nullopt;
    return it->second;
}

auto Support::relation_key(TypeId relation) const -> std::string
{
    return relation_key_of(relations_.name(relation), arity(relation));
}

auto leq_type(const TypeHierarchy & hierarchy, std::string_view a, std::string_view b) -> bool
{
    auto find = [&](std::string_view n) -> TypeId {
        for (std::size_t t = 0; t < hierarchy.size(); ++t)
            if (hierarchy.name(static_cast<TypeId>(t)) == n)
                return static_cast<TypeId>(t);
        throw Error("unknown type '" + std::string(n) + "'");
    };
    return hierarchy.leq(find(a), find(b));
}

auto leq_label(const Support & support, std::pair<std::string_view, std::string_view> a,
    std::pair<std::string_view, std::string_view> b) -> bool
{
    auto label = [&](std::pair<std::string_view, std::string_view> l) {
        auto t = support.find_concept(l.first);
        if (! t)
            throw Error("unknown concept type '" + std::string(l.first) + "'");
        ConceptLabel result{*t, generic_marker};
        if (! l.second.empty()) {
            auto m = support.find_marker(l.second);
            if (! m)
                throw Error("unknown marker '" + std::string(l.second) + "'");
            result.marker = *m;
        }
        return result;
    };
    return support.leq_label(label(a), label(b));
}

auto flat_support(const std::vector<std::pair<std::string, int>> & predicates, const std::vector<std::string> & constants,
    const std::string & top) -> SupportPtr
{
    SupportDeclarations decls;
    decls.concepts.push_back({top, {}});
    for (auto & [name, arity] : predicates) {
        decls.relations.push_back({name, arity, {}});
        decls.max_arity = std::max(decls.max_arity, arity);
    }
    for (auto & c : constants)
        decls.individuals.push_back({c, top});
    return Support::validate(decls);
}

} // namespace cgr
