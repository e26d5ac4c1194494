#pragma once

#include <cgr/graph.hpp>
#include <cgr/homomorphism.hpp>

#include <cstdint>

namespace cgr {

/// The irredundant form of a graph together with its folding.
struct Core {
    SimpleGraph graph;
    /// Projection of the input into `graph` that fixes every node of the core.
    Projection folding;
    /// Index in the input of each core node.
    std::vector<int> concept_origin;
    std::vector<int> relation_origin;
};

enum class RemovalOrder { forward, reverse };

auto is_redundant(const SimpleGraph & g) -> bool;

/// Removes nodes one at a time, in index order or its reverse, whenever the
/// current graph projects into itself minus that node.
auto irredundant_form(const SimpleGraph & g, RemovalOrder order = RemovalOrder::forward) -> Core;

auto equivalent(const SimpleGraph & g, const SimpleGraph & h) -> bool;

inline constexpr int default_isomorphism_bound = 512;

/// Label- and numbering-preserving bijection test. Throws BoundExceeded when
/// either graph has more than `bound` nodes.
auto isomorphic(const SimpleGraph & g, const SimpleGraph & h, int bound = default_isomorphism_bound) -> bool;

/// Renaming-invariant hash from color refinement. Isomorphic graphs hash equal.
auto structural_signature(const SimpleGraph & g) -> std::uint64_t;

} // namespace cgr
