#pragma once

// Reference SRC consistency check that follows the definition literally:
// every graph reachable by any sequence of rule applications is visited, and
// each violation found there must be repaired in some graph reachable from it.

#include <cgr/kb.hpp>

#include <optional>

namespace cgr::naive {

/// nullopt when more than `max_graphs` distinct graphs are reachable.
auto src_consistent(const KnowledgeBase & kb, std::size_t max_graphs = 200) -> std::optional<bool>;

} // namespace cgr::naive
