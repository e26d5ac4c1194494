#pragma once

#include <cgr/constraints.hpp>
#include <cgr/kb.hpp>
#include <cgr/rules.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cgr {

/// Search limits. Zero means unbounded, which is only accepted when the
/// rules involved are range restricted.
struct Budget {
    std::size_t max_rule_applications = 1000;
    std::size_t max_worlds = 1000;
    std::size_t max_restorability_depth = 1000;

    static auto unbounded() -> Budget { return {0, 0, 0}; }
};

enum class Outcome { proved, refuted, unknown };

auto to_string(Outcome o) -> std::string;

using NodeMap = std::vector<std::pair<std::string, std::string>>;

struct Certificate {
    /// Steps from the facts to the graph or world the rest refers to.
    DerivationTrace derivation;
    /// Query projections, as query id to graph id.
    std::vector<NodeMap> projections;
    std::vector<Violation> violations;
    std::size_t worlds_explored = 0;
    /// The verdict rests on a completed search rather than a witness.
    bool exhaustive = false;
};

struct Verdict {
    Outcome outcome = Outcome::unknown;
    std::size_t budget_spent = 0;
    std::optional<Certificate> certificate;
    std::vector<std::string> diagnostics;
};

enum class Model { sg, sr, sgc, src, sec, srec };

auto to_string(Model m) -> std::string;
auto parse_model(const std::string & name) -> Model;

auto sg_deduce(const SimpleGraph & q, const KnowledgeBase & kb) -> Verdict;
auto sr_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;
auto sgc_consistent(const KnowledgeBase & kb) -> Verdict;
auto sgc_deduce(const SimpleGraph & q, const KnowledgeBase & kb) -> Verdict;
auto src_consistent(const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;
auto src_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;
auto sec_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;
auto srec_deduce(const SimpleGraph & q, const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;

/// Whether a violation found in `g` can be repaired by deriving further with
/// `rules`. Exact on the closure for range-restricted rules.
auto restorable(const Violation & v, const Constraint & c, const SimpleGraph & g, const std::vector<Rule> & rules,
    const Budget & budget = {}) -> Verdict;

/// Consistency check for the `check` command: SRC when there are inference
/// rules, SGC otherwise.
auto check_consistency(const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;

/// Dispatch by model. A missing query means a consistency question.
auto ask(Model model, const std::optional<SimpleGraph> & q, const KnowledgeBase & kb, const Budget & budget = {}) -> Verdict;

/// Replays a certificate. Witnesses are re-checked directly; verdicts resting
/// on exhaustion are re-derived by running the search again. Returns an empty
/// string on success, else a diagnostic.
auto verify(const Verdict & v, Model model, const std::optional<SimpleGraph> & q, const KnowledgeBase & kb,
    const Budget & budget = {}) -> std::string;

} // namespace cgr
