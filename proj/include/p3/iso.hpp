#pragma once

#include "p3/triangulation.hpp"

namespace p3 {

/// Canonical form: identical strings exactly for isomorphic triangulations.
/// Lexicographically minimal adjacency encoding over candidate root tops,
/// pruned by color refinement; ties branch, so highly symmetric complexes pay
/// for it. `max_nodes` caps the branching (BudgetError beyond).
std::string iso_signature(const Triangulation& t, long long max_nodes = 2000000);

/// Simplicial isomorphism T1 -> T2 as a vertex-id bijection, or nullopt.
/// Color-refinement pruned backtracking; scales to the sizes produced by the
/// pipelines here.
std::optional<std::unordered_map<VertexId, VertexId>> isomorphic(
    const Triangulation& t1, const Triangulation& t2);

}  // namespace p3
