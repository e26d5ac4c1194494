#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cgr {

using TypeId = int;
using MarkerId = int;

inline constexpr MarkerId generic_marker = -1;

/// Name of the concept type reserved for the negative-to-positive constraint
/// encoding. Every support declares it implicitly; it is incomparable with
/// every other type and may only occur in constraints.
inline constexpr std::string_view not_there_type = "NotThere";

/// A partially ordered set of type names. Stores the Hasse edges as declared
/// and the full reflexive-transitive closure computed once at construction.
class TypeHierarchy {
public:
    TypeHierarchy() = default;

    /// Builds the hierarchy; `parents[i]` lists the direct supertypes of
    /// `names[i]`. Throws ValidationError on cycles.
    TypeHierarchy(std::vector<std::string> names, std::vector<std::vector<TypeId>> parents);

    [[nodiscard]] auto size() const -> std::size_t { return names_.size(); }
    [[nodiscard]] auto name(TypeId t) const -> const std::string & { return names_.at(static_cast<std::size_t>(t)); }
    [[nodiscard]] auto parents(TypeId t) const -> const std::vector<TypeId> & { return parents_.at(static_cast<std::size_t>(t)); }

    [[nodiscard]] auto leq(TypeId a, TypeId b) const -> bool
    {
        return closure_[static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b)] != 0;
    }

    /// Every t' with t <= t', including t itself, in id order.
    [[nodiscard]] auto supertypes(TypeId t) const -> std::vector<TypeId>;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<TypeId>> parents_;
    std::vector<char> closure_;
};

/// A concept node label: a type and either an individual marker or the
/// generic marker.
struct ConceptLabel {
    TypeId type = 0;
    MarkerId marker = generic_marker;

    [[nodiscard]] auto is_generic() const -> bool { return marker == generic_marker; }
    friend auto operator==(const ConceptLabel &, const ConceptLabel &) -> bool = default;
};

/// Raw, unchecked support declarations as read from a file or built by a
/// generator. Turned into a Support by Support::validate.
struct SupportDeclarations {
    struct Concept {
        std::string name;
        std::vector<std::string> parents;
    };
    struct Relation {
        std::string name;
        int arity = 0;
        std::vector<std::pair<std::string, int>> parents;
    };
    struct Individual {
        std::string marker;
        std::string type;
    };

    std::vector<Concept> concepts;
    std::vector<Relation> relations;
    std::vector<Individual> individuals;
    int max_arity = 8;
};

/// The ontology: concept types, relation types (arity is part of a relation
/// type's identity), individual markers and their typing map.
class Support {
public:
    /// Checks every invariant and reports all violations at once.
    static auto validate(const SupportDeclarations & decls) -> std::shared_ptr<const Support>;

    [[nodiscard]] auto concepts() const -> const TypeHierarchy & { return concepts_; }
    [[nodiscard]] auto relations() const -> const TypeHierarchy & { return relations_; }
    [[nodiscard]] auto arity(TypeId relation) const -> int { return arities_.at(static_cast<std::size_t>(relation)); }
    [[nodiscard]] auto max_arity() const -> int { return max_arity_; }

    [[nodiscard]] auto find_concept(std::string_view name) const -> std::optional<TypeId>;
    [[nodiscard]] auto find_relation(std::string_view name, int arity) const -> std::optional<TypeId>;
    /// All relation types carrying this name, whatever their arity.
    [[nodiscard]] auto relations_named(std::string_view name) const -> std::vector<TypeId>;

    [[nodiscard]] auto marker_count() const -> std::size_t { return markers_.size(); }
    [[nodiscard]] auto marker_name(MarkerId m) const -> const std::string & { return markers_.at(static_cast<std::size_t>(m)); }
    [[nodiscard]] auto find_marker(std::string_view name) const -> std::optional<MarkerId>;
    [[nodiscard]] auto tau(MarkerId m) const -> TypeId { return tau_.at(static_cast<std::size_t>(m)); }

    [[nodiscard]] auto not_there() const -> TypeId { return not_there_; }

    [[nodiscard]] auto leq_concept(TypeId a, TypeId b) const -> bool { return concepts_.leq(a, b); }
    [[nodiscard]] auto leq_relation(TypeId a, TypeId b) const -> bool { return relations_.leq(a, b); }
    [[nodiscard]] auto leq_label(const ConceptLabel & a, const ConceptLabel & b) const -> bool
    {
        return concepts_.leq(a.type, b.type) && (b.marker == generic_marker || a.marker == b.marker);
    }

    /// "name/arity" display form of a relation type.
    [[nodiscard]] auto relation_key(TypeId relation) const -> std::string;

    /// The declarations this support was validated from (reserved type omitted).
    [[nodiscard]] auto declarations() const -> const SupportDeclarations & { return decls_; }

    [[nodiscard]] auto fingerprint() const -> std::uint64_t { return fingerprint_; }

    /// Same object, or structurally identical declarations.
    [[nodiscard]] auto same_as(const Support & other) const -> bool
    {
        return this == &other || fingerprint_ == other.fingerprint_;
    }

private:
    Support() = default;

    SupportDeclarations decls_;
    TypeHierarchy concepts_;
    TypeHierarchy relations_;
    std::vector<int> arities_;
    std::vector<std::string> markers_;
    std::vector<TypeId> tau_;
    std::unordered_map<std::string, TypeId> concept_index_;
    std::unordered_map<std::string, TypeId> relation_index_;
    std::unordered_map<std::string, MarkerId> marker_index_;
    TypeId not_there_ = -1;
    int max_arity_ = 8;
    std::uint64_t fingerprint_ = 0;
};

using SupportPtr = std::shared_ptr<const Support>;

/// Named-type order query. Throws Error on unknown names.
auto leq_type(const TypeHierarchy & hierarchy, std::string_view a, std::string_view b) -> bool;

/// Label order over (type, marker) pairs given by name; an empty marker means
/// generic. Throws Error on unknown names.
auto leq_label(const Support & support, std::pair<std::string_view, std::string_view> a,
    std::pair<std::string_view, std::string_view> b) -> bool;

/// A support whose logical translation is empty: a single concept type, one
/// incomparable relation type per predicate, every constant typed by the top.
auto flat_support(const std::vector<std::pair<std::string, int>> & predicates, const std::vector<std::string> & constants,
    const std::string & top = "Top") -> SupportPtr;

/// 64-bit FNV-1a, used for fingerprints throughout.
auto fnv1a(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL) -> std::uint64_t;

} // namespace cgr
