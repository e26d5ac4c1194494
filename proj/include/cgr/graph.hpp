#pragma once

#include <cgr/support.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cgr {

struct ConceptNode {
    std::string id;
    ConceptLabel label;
};

/// A relation node; args[i] is the concept node at edge position i+1.
struct RelationNode {
    std::string id;
    TypeId type = 0;
    std::vector<int> args;
};

/// A bipartite labeled multigraph over a support. Concept and relation
/// nodes share one identifier namespace. Nodes are addressed by index;
/// indices are stable under append.
class SimpleGraph {
public:
    SimpleGraph() = default;
    explicit SimpleGraph(SupportPtr support) : support_(std::move(support)) {}

    [[nodiscard]] auto support() const -> const Support & { return *support_; }
    [[nodiscard]] auto support_ptr() const -> const SupportPtr & { return support_; }

    [[nodiscard]] auto concepts() const -> const std::vector<ConceptNode> & { return concepts_; }
    [[nodiscard]] auto relations() const -> const std::vector<RelationNode> & { return relations_; }
    [[nodiscard]] auto concept_at(int c) const -> const ConceptNode & { return concepts_[static_cast<std::size_t>(c)]; }
    [[nodiscard]] auto relation_at(int r) const -> const RelationNode & { return relations_[static_cast<std::size_t>(r)]; }
    [[nodiscard]] auto concept_count() const -> int { return static_cast<int>(concepts_.size()); }
    [[nodiscard]] auto relation_count() const -> int { return static_cast<int>(relations_.size()); }
    [[nodiscard]] auto node_count() const -> int { return concept_count() + relation_count(); }
    [[nodiscard]] auto empty() const -> bool { return concepts_.empty() && relations_.empty(); }

    /// (relation index, 0-based position) pairs incident to a concept node.
    [[nodiscard]] auto incidence(int c) const -> const std::vector<std::pair<int, int>> & { return incidence_[static_cast<std::size_t>(c)]; }

    [[nodiscard]] auto find_concept(const std::string & id) const -> std::optional<int>;
    [[nodiscard]] auto find_relation(const std::string & id) const -> std::optional<int>;
    [[nodiscard]] auto has_id(const std::string & id) const -> bool { return ids_.contains(id); }

    /// Checked append. Throws PreconditionError on duplicate ids, dangling
    /// arguments, arity mismatches, or a marker whose type is not tau(m).
    auto add_concept(std::string id, ConceptLabel label) -> int;
    auto add_relation(std::string id, TypeId type, std::vector<int> args) -> int;

    /// An id of the form `<prefix><n>` not yet used in this graph.
    auto fresh_id(const std::string & prefix = "~") -> std::string;

    /// Hash over ids, labels and edges. Equal graphs (same ids) hash equal;
    /// not invariant under renaming.
    [[nodiscard]] auto fingerprint() const -> std::uint64_t;

private:
    SupportPtr support_;
    std::vector<ConceptNode> concepts_;
    std::vector<RelationNode> relations_;
    std::vector<std::vector<std::pair<int, int>>> incidence_;
    std::unordered_map<std::string, std::pair<bool, int>> ids_;
    std::size_t fresh_hint_ = 0;
};

/// Node subset of a graph, by index.
struct NodeSet {
    std::vector<char> concepts;
    std::vector<char> relations;

    static auto none(const SimpleGraph & g) -> NodeSet;
    static auto all(const SimpleGraph & g) -> NodeSet;
};

/// Unchecked node and edge declarations.
struct RawGraph {
    struct Concept {
        std::string id;
        std::string type;
        std::string marker; // empty means generic
    };
    struct Relation {
        std::string id;
        std::string type;
        std::vector<std::string> args; // position i+1; empty string means missing
    };
    std::vector<Concept> concepts;
    std::vector<Relation> relations;
};

/// Builds a graph from declarations, reporting every violation at once.
/// The reserved NotThere type is only accepted when allow_reserved is set
/// (constraint bodies).
auto validate_graph(const RawGraph & raw, SupportPtr support, bool allow_reserved = false) -> SimpleGraph;

/// Reverse of validate_graph.
auto to_raw(const SimpleGraph & g) -> RawGraph;

/// Node-disjoint union. Ids are kept when they are unique across inputs;
/// clashing ids from input k are renamed `<id>@<k>`.
auto disjoint_union(const std::vector<SimpleGraph> & graphs) -> SimpleGraph;

/// Result of a merge: the merged graph and where each input node went.
struct Merged {
    SimpleGraph graph;
    std::vector<int> concept_map;
    std::vector<int> relation_map;
};

/// Merges individual concept nodes sharing a marker. The survivor carries the
/// lexicographically smallest id; node order otherwise follows the input.
auto normal_form_map(const SimpleGraph & g) -> Merged;
auto normal_form(const SimpleGraph & g) -> SimpleGraph;
auto is_normal(const SimpleGraph & g) -> bool;

/// Pairs of relation nodes with the same type and identical ordered arguments.
auto twin_relations(const SimpleGraph & g) -> std::vector<std::pair<int, int>>;

/// The subgraph induced by a node set. Relations with an argument outside the
/// set are dropped. Maps give the original index of every kept node.
struct Subgraph {
    SimpleGraph graph;
    std::vector<int> concept_origin;
    std::vector<int> relation_origin;
};
auto induced_subgraph(const SimpleGraph & g, const NodeSet & keep) -> Subgraph;

/// A simple graph with a {0,1} coloring. The 0-part must itself be a graph:
/// a 0-colored relation only has 0-colored arguments.
struct ColoredGraph {
    SimpleGraph graph;
    std::vector<char> concept_color;
    std::vector<char> relation_color;

    [[nodiscard]] auto concept_colored(int c, int color) const -> bool { return concept_color[static_cast<std::size_t>(c)] == color; }
    [[nodiscard]] auto relation_colored(int r, int color) const -> bool { return relation_color[static_cast<std::size_t>(r)] == color; }
};

/// Throws ValidationError if the coloring is malformed.
void validate_colored(const ColoredGraph & k);

/// The 0-colored part, with maps back into k.graph.
auto part_zero(const ColoredGraph & k) -> Subgraph;

/// Uniform coloring.
auto color_all(SimpleGraph g, int color) -> ColoredGraph;

} // namespace cgr
