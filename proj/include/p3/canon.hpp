#pragma once

#include "p3/base.hpp"

namespace p3 {

/// Directed graph with node colors and labeled edges; the canonical string
/// is identical exactly for isomorphic graphs (color- and label-preserving).
struct ColoredGraph {
  int n = 0;
  std::vector<std::uint64_t> color;
  // adj[u] = (v, label); direction is meaningful and encoded by the caller
  // in the labels (store both directions for undirected relations).
  std::vector<std::vector<std::pair<int, std::uint64_t>>> adj;
};

struct CanonResult {
  std::string encoding;
  std::vector<int> order;  // order[i] = node with canonical index i
};

/// Individualization-refinement canonical form. Branches on the first
/// non-singleton color class; max_nodes caps the search tree.
CanonResult canonical_graph(const ColoredGraph& g, long long max_nodes = 4000000);

}  // namespace p3
