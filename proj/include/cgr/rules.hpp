#pragma once

#include <cgr/graph.hpp>
#include <cgr/homomorphism.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cgr {

struct RuleClassification {
    bool range_restricted = false;
    bool disconnected = false;
};

auto classify(const ColoredGraph & k) -> RuleClassification;

enum class RuleKind { inference, evolution };

/// A rule: the 0-colored part is the hypothesis, the 1-colored part the
/// conclusion.
class Rule {
public:
    /// Throws ValidationError when the coloring is malformed.
    Rule(std::string id, ColoredGraph body);

    [[nodiscard]] auto id() const -> const std::string & { return id_; }
    [[nodiscard]] auto body() const -> const ColoredGraph & { return body_; }
    [[nodiscard]] auto hypothesis() const -> const SimpleGraph & { return hypothesis_.graph; }
    /// Body index of each hypothesis node.
    [[nodiscard]] auto hypothesis_concept_origin() const -> const std::vector<int> & { return hypothesis_.concept_origin; }
    [[nodiscard]] auto hypothesis_relation_origin() const -> const std::vector<int> & { return hypothesis_.relation_origin; }
    /// Hypothesis index of a 0-colored body concept node.
    [[nodiscard]] auto hypothesis_index(int body_concept) const -> int { return hyp_index_[static_cast<std::size_t>(body_concept)]; }
    [[nodiscard]] auto classification() const -> const RuleClassification & { return classification_; }
    [[nodiscard]] auto range_restricted() const -> bool { return classification_.range_restricted; }

private:
    std::string id_;
    ColoredGraph body_;
    Subgraph hypothesis_;
    std::vector<int> hyp_index_;
    RuleClassification classification_;
};

inline auto classify_rule(const Rule & r) -> RuleClassification { return r.classification(); }

/// One rule application recorded in a derivation.
struct DerivationStep {
    std::string rule;
    RuleKind kind = RuleKind::inference;
    /// Hypothesis node id to graph node id, concepts then relations.
    std::vector<std::pair<std::string, std::string>> node_map;
    /// Fingerprint of the graph after the step.
    std::uint64_t fingerprint = 0;
};

using DerivationTrace = std::vector<DerivationStep>;

/// The running state of a derivation.
struct Derivation {
    SimpleGraph graph;
    DerivationTrace steps;
    /// Keys of every application already tried, including ones that added nothing.
    std::set<std::string> used;
    bool fixpoint = false;
    bool exhausted = false;
    std::size_t rounds = 0;
};

struct Application {
    SimpleGraph graph;
    bool changed = false;
};

enum class Strategy { breadth, depth };

struct DeriveOptions {
    Strategy strategy = Strategy::breadth;
    /// Maximum number of steps that change the graph; no_limit for none.
    std::size_t budget = no_limit;
    RuleKind kind = RuleKind::inference;
    /// Called after each breadth round; return false to stop early.
    std::function<bool(const Derivation &)> round_end;
};

/// Identifies an application by rule and hypothesis images.
auto application_key(const Rule & rule, const SimpleGraph & g, const Projection & pi) -> std::string;

auto applicable_projections(const Rule & rule, const SimpleGraph & g) -> std::vector<Projection>;

/// Grafts a fresh copy of the conclusion along pi. New individual nodes merge
/// into existing ones with the same marker; relation nodes that would be twins
/// of existing ones are not created. Fresh ids are `~<n>`.
auto apply_rule(const Rule & rule, const SimpleGraph & g, const Projection & pi) -> Application;

/// As above, checked against and recorded in `trace`. Throws
/// UselessApplication when the same application was already used.
auto apply_rule(const Rule & rule, const Projection & pi, Derivation & trace, RuleKind kind = RuleKind::inference) -> bool;

auto derive(const SimpleGraph & g, const std::vector<Rule> & rules, const DeriveOptions & options = {}) -> Derivation;

/// Continues an existing derivation.
void derive_more(Derivation & d, const std::vector<Rule> & rules, const DeriveOptions & options = {});

auto all_range_restricted(const std::vector<Rule> & rules) -> bool;
auto first_unrestricted(const std::vector<Rule> & rules) -> const Rule *;

/// The closed graph. Without a budget every rule must be range restricted
/// (PreconditionError otherwise); BudgetExhausted when the budget runs out.
auto closure(const SimpleGraph & g, const std::vector<Rule> & rules, std::optional<std::size_t> budget = std::nullopt)
    -> Derivation;

auto full_graph(const SimpleGraph & g, const std::vector<Rule> & rules, std::optional<std::size_t> budget = std::nullopt)
    -> SimpleGraph;

/// Splits a range-restricted rule into rules with one conclusion node each;
/// ids are `<id>.<k>`. PreconditionError when the rule is not range restricted.
auto decompose_rr(const Rule & rule) -> std::vector<Rule>;

struct ClosureBounds {
    std::uint64_t M = 0;
    std::uint64_t N = 0;
    std::uint64_t L = 0;
    std::map<int, std::uint64_t> P;
    int k = 0;
};

/// Saturating arithmetic; values clamp at UINT64_MAX.
auto closure_bounds(const SimpleGraph & g, const std::vector<Rule> & rules) -> ClosureBounds;

/// Re-applies each step to `start`, checking projections and fingerprints.
/// Returns an empty string on success, else a diagnostic.
auto replay(const SimpleGraph & start, const std::vector<const Rule *> & rules, const DerivationTrace & trace,
    SimpleGraph * result = nullptr) -> std::string;

} // namespace cgr
