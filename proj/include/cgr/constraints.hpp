#pragma once

#include <cgr/graph.hpp>
#include <cgr/homomorphism.hpp>
#include <cgr/rules.hpp>

#include <string>
#include <vector>

namespace cgr {

enum class Polarity { positive, negative };

/// A constraint: the 0-colored part is the trigger, the 1-colored part the
/// obligation (positive) or interdiction (negative).
class Constraint {
public:
    /// Throws ValidationError when the coloring is malformed.
    Constraint(std::string id, ColoredGraph body, Polarity polarity);

    [[nodiscard]] auto id() const -> const std::string & { return id_; }
    [[nodiscard]] auto body() const -> const ColoredGraph & { return body_; }
    [[nodiscard]] auto polarity() const -> Polarity { return polarity_; }
    [[nodiscard]] auto trigger() const -> const SimpleGraph & { return trigger_.graph; }
    [[nodiscard]] auto trigger_concept_origin() const -> const std::vector<int> & { return trigger_.concept_origin; }
    [[nodiscard]] auto trigger_relation_origin() const -> const std::vector<int> & { return trigger_.relation_origin; }
    [[nodiscard]] auto classification() const -> const RuleClassification & { return classification_; }

    /// The same colored graph read as a rule.
    [[nodiscard]] auto as_rule() const -> Rule { return Rule(id_, body_); }

private:
    std::string id_;
    ColoredGraph body_;
    Polarity polarity_;
    Subgraph trigger_;
    RuleClassification classification_;
};

struct Violation {
    std::string constraint;
    Polarity kind = Polarity::positive;
    /// Trigger projection into irr(g) for positive constraints, into g for
    /// negative ones. Core nodes keep their ids, so node_map ids are ids of g.
    Projection pi;
    std::vector<std::pair<std::string, std::string>> node_map;
};

struct CheckOptions {
    std::size_t limit = no_limit;
    /// Check trigger projections across OpenMP threads.
    bool parallel = false;
};

auto violations(const SimpleGraph & g, const Constraint & c, CheckOptions options = {}) -> std::vector<Violation>;
auto satisfies(const SimpleGraph & g, const Constraint & c) -> bool;

/// Serial reference for violations(): no fast paths, no threads.
auto violations_reference(const SimpleGraph & g, const Constraint & c) -> std::vector<Violation>;

/// Whether a trigger projection extends to the whole constraint in `target`.
auto extends(const Constraint & c, const Projection & trigger_pi, const SimpleGraph & target) -> bool;

/// Recolors every node 0 and adds a 1-colored node of the reserved NotThere
/// type. PreconditionError unless c is negative.
auto negative_to_positive(const Constraint & c) -> Constraint;

} // namespace cgr
