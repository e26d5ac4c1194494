#pragma once

#include <cgr/kb.hpp>
#include <cgr/reasoner.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace cgr {

struct ParsedKb {
    KnowledgeBase kb;
    std::optional<SimpleGraph> query;
};

/// Reads the line-oriented KB format. Syntax errors raise ParseError with a
/// position; semantic problems raise ValidationError with every diagnostic.
auto parse_kb(std::string_view text) -> ParsedKb;

/// Graph lines over an existing support, optionally under a `[query]` header.
auto parse_graph(std::string_view text, SupportPtr support) -> SimpleGraph;

/// Canonical text; parse_kb(print_kb(kb)) reproduces kb.
auto print_kb(const KnowledgeBase & kb, const std::optional<SimpleGraph> & query = std::nullopt) -> std::string;

/// Concept lines then relation lines, in node order.
auto print_graph(const SimpleGraph & g) -> std::string;

/// JSON document with `"schema": 1`. Node maps are objects keyed by source ids
/// in node order.
auto verdict_to_json(const Verdict & v, int indent = 2) -> std::string;
auto verdict_from_json(std::string_view text) -> Verdict;

} // namespace cgr
