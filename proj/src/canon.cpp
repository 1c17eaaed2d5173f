#include "p3/canon.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace p3 {

namespace {

std::vector<std::uint64_t> refine(const ColoredGraph& g,
                                  std::vector<std::uint64_t> color) {
  for (;;) {
    std::set<std::uint64_t> before(color.begin(), color.end());
    std::vector<std::uint64_t> next(g.n);
    for (int u = 0; u < g.n; ++u) {
      std::vector<std::uint64_t> sig;
      sig.reserve(g.adj[u].size());
      for (auto& [v, lab] : g.adj[u])
        sig.push_back(fnv1a64(&lab, sizeof lab, color[v]));
      std::sort(sig.begin(), sig.end());
      std::uint64_t h = color[u];
      for (auto s : sig) h = fnv1a64(&s, sizeof s, h);
      next[u] = h;
    }
    std::set<std::uint64_t> after(next.begin(), next.end());
    bool stable = after.size() == before.size();
    color = std::move(next);
    if (stable) return color;
  }
}

struct CanonSearch {
  const ColoredGraph* g;
  long long nodes = 0;
  long long max_nodes;
  std::string best;
  std::vector<int> best_order;
  bool have_best = false;

  void encode_and_keep(const std::vector<std::uint64_t>& color) {
    // all classes singletons: canonical index = rank of color
    std::vector<int> order(g->n);
    std::vector<std::pair<std::uint64_t, int>> by_color;
    for (int u = 0; u < g->n; ++u) by_color.push_back({color[u], u});
    std::sort(by_color.begin(), by_color.end());
    std::vector<int> index(g->n);
    for (int i = 0; i < g->n; ++i) {
      order[i] = by_color[i].second;
      index[by_color[i].second] = i;
    }
    std::string enc = std::to_string(g->n) + "#";
    for (int i = 0; i < g->n; ++i) {
      int u = order[i];
      enc += hex64(g->color[u]);
      std::vector<std::pair<int, std::uint64_t>> nb;
      for (auto& [v, lab] : g->adj[u]) nb.push_back({index[v], lab});
      std::sort(nb.begin(), nb.end());
      for (auto& [vi, lab] : nb) {
        enc += ":" + std::to_string(vi) + "." + hex64(lab);
      }
      enc += ";";
    }
    if (!have_best || enc < best) {
      best = std::move(enc);
      best_order = std::move(order);
      have_best = true;
    }
  }

  void run(std::vector<std::uint64_t> color) {
    if (++nodes > max_nodes)
      throw BudgetError("canonical_graph: branching budget exhausted");
    color = refine(*g, color);
    // find smallest non-singleton class
    std::map<std::uint64_t, std::vector<int>> classes;
    for (int u = 0; u < g->n; ++u) classes[color[u]].push_back(u);
    const std::vector<int>* branch = nullptr;
    for (auto& [c, members] : classes)
      if (members.size() > 1) {
        branch = &members;
        break;
      }
    if (!branch) {
      encode_and_keep(color);
      return;
    }
    for (int u : *branch) {
      auto next = color;
      next[u] = fnv1a64(&next[u], sizeof next[u], 0x9e3779b97f4a7c15ull);
      run(std::move(next));
    }
  }
};

}  // namespace

CanonResult canonical_graph(const ColoredGraph& g, long long max_nodes) {
  check_internal(g.n > 0, "canonical_graph: empty graph");
  CanonSearch s;
  s.g = &g;
  s.max_nodes = max_nodes;
  s.run(g.color);
  check_internal(s.have_best, "canonical_graph: no labeling found");
  return CanonResult{std::move(s.best), std::move(s.best_order)};
}

}  // namespace p3
