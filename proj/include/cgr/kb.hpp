#pragma once

#include <cgr/constraints.hpp>
#include <cgr/graph.hpp>
#include <cgr/rules.hpp>

#include <vector>

namespace cgr {

/// Facts, inference rules, evolution rules and constraints over one support.
struct KnowledgeBase {
    SupportPtr support;
    SimpleGraph facts;
    std::vector<Rule> inference;
    std::vector<Rule> evolution;
    std::vector<Constraint> constraints;

    /// Every rule, inference first.
    [[nodiscard]] auto all_rules() const -> std::vector<Rule>;
    [[nodiscard]] auto rule_pointers() const -> std::vector<const Rule *>;
};

/// Checks that every component uses `support` and that rule and constraint
/// ids are unique. Facts are put into normal form.
auto make_kb(SupportPtr support, SimpleGraph facts, std::vector<Rule> inference = {}, std::vector<Rule> evolution = {},
    std::vector<Constraint> constraints = {}) -> KnowledgeBase;

} // namespace cgr
