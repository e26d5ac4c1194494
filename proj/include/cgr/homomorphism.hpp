#pragma once

#include <cgr/graph.hpp>

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace cgr {

/// Node maps from a source graph into a target graph, by index. A partial
/// projection uses -1 for nodes outside its domain.
struct Projection {
    std::vector<int> concept_map;
    std::vector<int> relation_map;

    friend auto operator==(const Projection &, const Projection &) -> bool = default;
    friend auto operator<(const Projection & a, const Projection & b) -> bool
    {
        return a.concept_map != b.concept_map ? a.concept_map < b.concept_map : a.relation_map < b.relation_map;
    }
};

using PartialProjection = Projection;

struct ProjectionSet {
    std::vector<Projection> projections;
    bool truncated = false;
};

inline constexpr std::size_t no_limit = std::numeric_limits<std::size_t>::max();

struct SearchOptions {
    std::size_t limit = no_limit;
    /// Split the root branch across OpenMP threads. Output order is the same
    /// as the serial search.
    bool parallel = false;
};

/// Callback for lazy enumeration; return false to stop.
using ProjectionVisitor = std::function<bool(const Projection &)>;

/// Checks both projection conditions. Entries equal to -1 are skipped, so
/// this also checks partial projections on their domain.
auto is_projection(const SimpleGraph & query, const SimpleGraph & target, const Projection & p) -> bool;

auto exists_projection(const SimpleGraph & query, const SimpleGraph & target) -> bool;
auto find_projection(const SimpleGraph & query, const SimpleGraph & target) -> std::optional<Projection>;

/// Every projection, in deterministic order, truncated at options.limit.
auto enumerate_projections(const SimpleGraph & query, const SimpleGraph & target, SearchOptions options = {}) -> ProjectionSet;

/// Lazy form of enumerate_projections. `fixed` may pin some nodes (-1 = free).
void for_each_projection(const SimpleGraph & query, const SimpleGraph & target, const PartialProjection * fixed,
    const ProjectionVisitor & visit);

/// Every full projection of `whole` that agrees with `partial` on `domain`.
/// Throws PreconditionError when `partial` is not a projection of the
/// subgraph induced by `domain`.
auto extend_projection(const SimpleGraph & whole, const NodeSet & domain, const PartialProjection & partial,
    const SimpleGraph & target, SearchOptions options = {}) -> ProjectionSet;

/// Serial reference solver: plain backtracking with no root splitting. Kept
/// for cross-checking and benchmarks.
auto enumerate_projections_serial(const SimpleGraph & query, const SimpleGraph & target, std::size_t limit = no_limit)
    -> ProjectionSet;

auto identity_projection(const SimpleGraph & g) -> Projection;

/// second ∘ first.
auto compose(const Projection & first, const Projection & second) -> Projection;

} // namespace cgr
