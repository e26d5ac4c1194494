#include <cgr/error.hpp>
#include <cgr/graph.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cgr {

auto SimpleGraph::find_concept(const std::string & id) const -> std::optional<int>
{
    auto it = ids_.find(id);
    if (it == ids_.end() || ! it->second.first)
        return std::nullopt;
    return it->second.second;
}

auto SimpleGraph::find_relation(const std::string & id) const -> std::optional<int>
{
    auto it = ids_.find(id);
    if (it == ids_.end() || it->second.first)
        return std::nullopt;
    return it->second.second;
}

auto SimpleGraph::add_concept(std::string id, ConceptLabel label) -> int
{
    if (ids_.contains(id))
        throw PreconditionError("duplicate node id '" + id + "'");
    if (label.type < 0 || static_cast<std::size_t>(label.type) >= support_->concepts().size())
        throw PreconditionError("concept node '" + id + "' has an unknown type");
    if (! label.is_generic()) {
        if (label.marker < 0 || static_cast<std::size_t>(label.marker) >= support_->marker_count())
            throw PreconditionError("concept node '" + id + "' has an unknown marker");
        if (support_->tau(label.marker) != label.type)
            throw PreconditionError("concept node '" + id + "' has type other than tau(" + support_->marker_name(label.marker) + ")");
    }
    int index = concept_count();
    ids_.emplace(id, std::pair{true, index});
    concepts_.push_back({std::move(id), label});
    incidence_.emplace_back();
    return index;
}

auto SimpleGraph::add_relation(std::string id, TypeId type, std::vector<int> args) -> int
{
    if (ids_.contains(id))
        throw PreconditionError("duplicate node id '" + id + "'");
    if (type < 0 || static_cast<std::size_t>(type) >= support_->relations().size())
        throw PreconditionError("relation node '" + id + "' has an unknown type");
    if (static_cast<int>(args.size()) != support_->arity(type))
        throw PreconditionError("relation node '" + id + "' has " + std::to_string(args.size()) + " arguments, type "
            + support_->relation_key(type) + " needs " + std::to_string(support_->arity(type)));
    for (auto a : args)
        if (a < 0 || a >= concept_count())
            throw PreconditionError("relation node '" + id + "' has a dangling argument");
    int index = relation_count();
    ids_.emplace(id, std::pair{false, index});
    for (std::size_t i = 0; i < args.size(); ++i)
        incidence_[static_cast<std::size_t>(args[i])].emplace_back(index, static_cast<int>(i));
    relations_.push_back({std::move(id), type, std::move(args)});
    return index;
}

auto SimpleGraph::fresh_id(const std::string & prefix) -> std::string
{
    bool hinted = prefix == "~";
    for (std::size_t n = hinted ? fresh_hint_ : 0;; ++n) {
        auto candidate = prefix + std::to_string(n);
        if (! ids_.contains(candidate)) {
            if (hinted)
                fresh_hint_ = n;
            return candidate;
        }
    }
}

auto SimpleGraph::fingerprint() const -> std::uint64_t
{
    std::ostringstream out;
    for (auto & c : concepts_)
        out << 'c' << c.id << ':' << c.label.type << ':' << c.label.marker << ';';
    for (auto & r : relations_) {
        out << 'r' << r.id << ':' << r.type;
        for (auto a : r.args)
            out << ',' << concepts_[static_cast<std::size_t>(a)].id;
        out << ';';
    }
    return fnv1a(out.str());
}

auto NodeSet::none(const SimpleGraph & g) -> NodeSet
{
    return {std::vector<char>(static_cast<std::size_t>(g.concept_count()), 0),
        std::vector<char>(static_cast<std::size_t>(g.relation_count()), 0)};
}

auto NodeSet::all(const SimpleGraph & g) -> NodeSet
{
    return {std::vector<char>(static_cast<std::size_t>(g.concept_count()), 1),
        std::vector<char>(static_cast<std::size_t>(g.relation_count()), 1)};
}

auto validate_graph(const RawGraph & raw, SupportPtr support, bool allow_reserved) -> SimpleGraph
{
    std::vector<std::string> diags;
    std::set<std::string> seen;
    std::map<std::string, ConceptLabel> labels;

    for (auto & c : raw.concepts) {
        if (! seen.insert(c.id).second) {
            diags.push_back("duplicate node id '" + c.id + "'");
            continue;
        }
        auto t = support->find_concept(c.type);
        if (! t) {
            diags.push_back("concept node '" + c.id + "' has unknown type '" + c.type + "'");
            continue;
        }
        if (*t == support->not_there() && ! allow_reserved)
            diags.push_back("concept node '" + c.id + "' uses the reserved type '" + c.type + "'");
        ConceptLabel label{*t, generic_marker};
        if (! c.marker.empty()) {
            auto m = support->find_marker(c.marker);
            if (! m) {
                diags.push_back("concept node '" + c.id + "' has unknown marker '" + c.marker + "'");
                continue;
            }
            if (support->tau(*m) != *t) {
                diags.push_back("concept node '" + c.id + "' has type '" + c.type + "' but tau(" + c.marker + ") = '"
                    + support->concepts().name(support->tau(*m)) + "'");
                continue;
            }
            label.marker = *m;
        }
        labels.emplace(c.id, label);
    }

    for (auto & r : raw.relations) {
        if (! seen.insert(r.id).second) {
            diags.push_back("duplicate node id '" + r.id + "'");
            continue;
        }
        auto declared = support->relations_named(r.type);
        if (declared.empty()) {
            diags.push_back("relation node '" + r.id + "' has unknown type '" + r.type + "'");
            continue;
        }
        auto arity = static_cast<int>(r.args.size());
        if (! support->find_relation(r.type, arity)) {
            for (auto t : declared) {
                auto k = support->arity(t);
                if (k > arity)
                    for (int p = arity + 1; p <= k; ++p)
                        diags.push_back("relation node '" + r.id + "' of type " + support->relation_key(t)
                            + " is missing position " + std::to_string(p));
                else
                    diags.push_back("relation node '" + r.id + "' of type " + support->relation_key(t) + " has "
                        + std::to_string(arity) + " edges");
            }
            continue;
        }
        for (std::size_t i = 0; i < r.args.size(); ++i) {
            if (r.args[i].empty())
                diags.push_back("relation node '" + r.id + "' is missing position " + std::to_string(i + 1));
            else if (! labels.contains(r.args[i])) {
                bool declared_concept = std::any_of(raw.concepts.begin(), raw.concepts.end(), [&](auto & c) { return c.id == r.args[i]; });
                if (! declared_concept)
                    diags.push_back("relation node '" + r.id + "' position " + std::to_string(i + 1) + " refers to unknown concept node '"
                        + r.args[i] + "'");
            }
        }
    }

    if (! diags.empty())
        throw ValidationError(std::move(diags));

    SimpleGraph g(std::move(support));
    for (auto & c : raw.concepts)
        g.add_concept(c.id, labels.at(c.id));
    for (auto & r : raw.relations) {
        std::vector<int> args;
        for (auto & a : r.args)
            args.push_back(*g.find_concept(a));
        auto type = *g.support().find_relation(r.type, static_cast<int>(args.size()));
        g.add_relation(r.id, type, std::move(args));
    }
    return g;
}

auto to_raw(const SimpleGraph & g) -> RawGraph
{
    RawGraph raw;
    auto & s = g.support();
    for (auto & c : g.concepts())
        raw.concepts.push_back({c.id, s.concepts().name(c.label.type), c.label.is_generic() ? "" : s.marker_name(c.label.marker)});
    for (auto & r : g.relations()) {
        RawGraph::Relation rr{r.id, s.relations().name(r.type), {}};
        for (auto a : r.args)
            rr.args.push_back(g.concept_at(a).id);
        raw.relations.push_back(std::move(rr));
    }
    return raw;
}

auto disjoint_union(const std::vector<SimpleGraph> & graphs) -> SimpleGraph
{
    if (graphs.empty())
        return {};
    for (auto & g : graphs)
        if (! g.support().same_as(graphs.front().support()))
            throw SupportMismatch();

    std::map<std::string, int> uses;
    for (auto & g : graphs) {
        for (auto & c : g.concepts())
            ++uses[c.id];
        for (auto & r : g.relations())
            ++uses[r.id];
    }

    SimpleGraph result(graphs.front().support_ptr());
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        auto & g = graphs[k];
        auto rename = [&](const std::string & id) {
            if (uses[id] == 1)
                return id;
            auto candidate = id + "@" + std::to_string(k);
            while (result.has_id(candidate) || uses.contains(candidate))
                candidate += "'";
            return candidate;
        };
        int base = result.concept_count();
        for (auto & c : g.concepts())
            result.add_concept(rename(c.id), c.label);
        for (auto & r : g.relations()) {
            auto args = r.args;
            for (auto & a : args)
                a += base;
            result.add_relation(rename(r.id), r.type, std::move(args));
        }
    }
    return result;
}

auto normal_form_map(const SimpleGraph & g) -> Merged
{
    // survivor per marker: the smallest id among same-marker nodes
    std::map<MarkerId, int> survivor;
    for (int c = 0; c < g.concept_count(); ++c) {
        auto & node = g.concept_at(c);
        if (node.label.is_generic())
            continue;
        auto it = survivor.find(node.label.marker);
        if (it == survivor.end())
            survivor.emplace(node.label.marker, c);
        else if (node.id < g.concept_at(it->second).id)
            it->second = c;
    }

    Merged m{SimpleGraph(g.support_ptr()), std::vector<int>(static_cast<std::size_t>(g.concept_count()), -1), {}};
    std::map<MarkerId, int> placed;
    for (int c = 0; c < g.concept_count(); ++c) {
        auto & node = g.concept_at(c);
        if (node.label.is_generic()) {
            m.concept_map[static_cast<std::size_t>(c)] = m.graph.add_concept(node.id, node.label);
            continue;
        }
        auto it = placed.find(node.label.marker);
        if (it == placed.end()) {
            auto & keep = g.concept_at(survivor.at(node.label.marker));
            it = placed.emplace(node.label.marker, m.graph.add_concept(keep.id, keep.label)).first;
        }
        m.concept_map[static_cast<std::size_t>(c)] = it->second;
    }
    for (auto & r : g.relations()) {
        auto args = r.args;
        for (auto & a : args)
            a = m.concept_map[static_cast<std::size_t>(a)];
        m.relation_map.push_back(m.graph.add_relation(r.id, r.type, std::move(args)));
    }
    return m;
}

auto normal_form(const SimpleGraph & g) -> SimpleGraph
{
    return normal_form_map(g).graph;
}

auto is_normal(const SimpleGraph & g) -> bool
{
    std::set<MarkerId> markers;
    for (auto & c : g.concepts())
        if (! c.label.is_generic() && ! markers.insert(c.label.marker).second)
            return false;
    return true;
}

auto twin_relations(const SimpleGraph & g) -> std::vector<std::pair<int, int>>
{
    std::map<std::pair<TypeId, std::vector<int>>, int> first;
    std::vector<std::pair<int, int>> twins;
    for (int r = 0; r < g.relation_count(); ++r) {
        auto & node = g.relation_at(r);
        auto [it, inserted] = first.emplace(std::pair{node.type, node.args}, r);
        if (! inserted)
            twins.emplace_back(it->second, r);
    }
    return twins;
}

auto induced_subgraph(const SimpleGraph & g, const NodeSet & keep) -> Subgraph
{
    Subgraph s{SimpleGraph(g.support_ptr()), {}, {}};
    std::vector<int> index(static_cast<std::size_t>(g.concept_count()), -1);
    for (int c = 0; c < g.concept_count(); ++c)
        if (keep.concepts[static_cast<std::size_t>(c)]) {
            index[static_cast<std::size_t>(c)] = s.graph.add_concept(g.concept_at(c).id, g.concept_at(c).label);
            s.concept_origin.push_back(c);
        }
    for (int r = 0; r < g.relation_count(); ++r) {
        if (! keep.relations[static_cast<std::size_t>(r)])
            continue;
        auto args = g.relation_at(r).args;
        bool inside = true;
        for (auto & a : args) {
            a = index[static_cast<std::size_t>(a)];
            inside = inside && a >= 0;
        }
        if (! inside)
            continue;
        s.graph.add_relation(g.relation_at(r).id, g.relation_at(r).type, std::move(args));
        s.relation_origin.push_back(r);
    }
    return s;
}

void validate_colored(const ColoredGraph & k)
{
    std::vector<std::string> diags;
    if (k.concept_color.size() != static_cast<std::size_t>(k.graph.concept_count())
        || k.relation_color.size() != static_cast<std::size_t>(k.graph.relation_count()))
        throw ValidationError({"coloring does not cover every node"});
    for (auto c : k.concept_color)
        if (c != 0 && c != 1)
            diags.push_back("colors must be 0 or 1");
    for (int r = 0; r < k.graph.relation_count(); ++r) {
        if (! k.relation_colored(r, 0))
            continue;
        for (auto a : k.graph.relation_at(r).args)
            if (! k.concept_colored(a, 0))
                diags.push_back("0-colored relation node '" + k.graph.relation_at(r).id + "' has 1-colored neighbor '"
                    + k.graph.concept_at(a).id + "'");
    }
    if (! diags.empty())
        throw ValidationError(std::move(diags));
}

auto part_zero(const ColoredGraph & k) -> Subgraph
{
    NodeSet keep = NodeSet::none(k.graph);
    for (std::size_t c = 0; c < keep.concepts.size(); ++c)
        keep.concepts[c] = k.concept_color[c] == 0;
    for (std::size_t r = 0; r < keep.relations.size(); ++r)
        keep.relations[r] = k.relation_color[r] == 0;
    return induced_subgraph(k.graph, keep);
}

auto color_all(SimpleGraph g, int color) -> ColoredGraph
{
    auto nc = static_cast<std::size_t>(g.concept_count());
    auto nr = static_cast<std::size_t>(g.relation_count());
    return {std::move(g), std::vector<char>(nc, static_cast<char>(color)), std::vector<char>(nr, static_cast<char>(color))};
}

} // namespace cgr
