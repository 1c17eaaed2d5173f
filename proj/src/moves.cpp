#include "p3/moves.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "p3/iso.hpp"

namespace p3 {

namespace {

VertexId resolve(const Triangulation& t, const std::string& label) {
  auto v = t.vertex_by_label(label);
  require(v.has_value(), "unknown vertex label: " + label);
  return *v;
}

std::string simplex_text(const Triangulation& t, std::vector<VertexId> vs) {
  std::string s = "{";
  for (std::size_t i = 0; i < vs.size(); ++i)
    s += (i ? "," : "") + t.label(vs[i]);
  return s + "}";
}

}  // namespace

bool is_contractible(const Triangulation& t, const Edge& e,
                     std::string* witness) {
  require(t.has_edge(e), "is_contractible: unknown edge");
  VertexId a = e[0], b = e[1];

  // Shared link vertices must be vertices of lk(e).
  auto lva = t.link_vertices(a);
  std::set<VertexId> la(lva.begin(), lva.end());
  for (VertexId c : t.link_vertices(b)) {
    if (!la.count(c)) continue;
    bool in_lk_e = t.dim() == 3 ? t.has_triangle(make_tri(a, b, c))
                                : t.has_triangle(make_tri(a, b, c));
    if (!in_lk_e) {
      if (witness) *witness = "vertex " + simplex_text(t, {c});
      return false;
    }
  }
  if (t.dim() == 2) return true;

  // Shared link edges must be edges of lk(e).
  std::set<Edge> lea;
  for (const Edge& le : t.link_edges(a)) lea.insert(le);
  for (const Edge& le : t.link_edges(b)) {
    if (!lea.count(le)) continue;
    if (le[0] == a || le[0] == b || le[1] == a || le[1] == b) continue;
    if (!t.has_top(make_tet(a, b, le[0], le[1]))) {
      if (witness) *witness = "edge " + simplex_text(t, {le[0], le[1]});
      return false;
    }
  }

  // A shared link triangle would need a 4-simplex; always a violation.
  std::set<Tri> lta;
  for (int i : t.tops_at(a)) {
    const Tet& top = t.tops()[i];
    if (std::find(top.begin(), top.end(), b) != top.end()) continue;
    Tri f{kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (int j = 0; j < 4; ++j)
      if (top[j] != a) f[k++] = top[j];
    lta.insert(f);
  }
  for (int i : t.tops_at(b)) {
    const Tet& top = t.tops()[i];
    if (std::find(top.begin(), top.end(), a) != top.end()) continue;
    Tri f{kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (int j = 0; j < 4; ++j)
      if (top[j] != b) f[k++] = top[j];
    if (lta.count(f)) {
      if (witness)
        *witness = "triangle " + simplex_text(t, {f[0], f[1], f[2]});
      return false;
    }
  }
  return true;
}

bool is_contractible(const Triangulation& t, const std::string& a,
                     const std::string& b, std::string* witness) {
  return is_contractible(t, make_edge(resolve(t, a), resolve(t, b)), witness);
}

ContractResult contract(const Triangulation& t, const std::string& keep,
                        const std::string& remove) {
  VertexId a = resolve(t, keep);
  VertexId b = resolve(t, remove);
  Edge e = make_edge(a, b);
  require(t.has_edge(e), "contract: no edge {" + keep + "," + remove + "}");
  std::string witness;
  if (!is_contractible(t, e, &witness))
    throw DomainError("contract: link condition fails at " + witness +
                      " (in lk(" + keep + ") and lk(" + remove +
                      ") but not lk(edge))");

  // Inverse expansion data: facets of the b-side of the link.
  ExpandData inv;
  inv.vertex = keep;
  inv.new_vertex = remove;
  std::vector<Tet> tops;
  int removed = 0;
  for (const auto& top : t.tops()) {
    bool has_a = false, has_b = false;
    for (int i = 0; i <= t.dim(); ++i) {
      has_a |= top[i] == a;
      has_b |= top[i] == b;
    }
    if (has_a && has_b) {
      ++removed;
      continue;
    }
    if (has_b) {
      std::vector<std::string> facet;
      for (int i = 0; i <= t.dim(); ++i)
        if (top[i] != b) facet.push_back(t.label(top[i]));
      std::sort(facet.begin(), facet.end());
      inv.side_new.push_back(std::move(facet));
      Tet nt = top;
      for (int i = 0; i <= t.dim(); ++i)
        if (nt[i] == b) nt[i] = a;
      std::sort(nt.begin(), nt.begin() + t.dim() + 1);
      tops.push_back(nt);
    } else {
      tops.push_back(top);
    }
  }
  std::sort(inv.side_new.begin(), inv.side_new.end());
  Triangulation result(t.dim(), std::move(tops), t.label_table());
  return ContractResult{std::move(result), Move::expansion(std::move(inv)),
                        removed};
}

namespace {

// Side of a vertex split: facets as id-tuples within the link of v.
struct SplitSides {
  std::vector<Tri> side_keep;
  std::vector<Tri> side_new;
  std::vector<Edge> equator;       // dim 3: equator edges; dim 2: unused
  std::vector<VertexId> equator_v; // equator vertices
};

// Facet adjacency components and disc/arc verification for one side.
void verify_side_disc(const Triangulation& t, const std::vector<Tri>& side,
                      const std::set<Edge>& equator_edges,
                      const std::set<VertexId>& equator_vertices,
                      const std::string& which) {
  require(!side.empty(), "expand: side " + which + " is empty");
  if (t.dim() == 3) {
    // connected through non-equator edges
    std::map<Edge, std::vector<int>> by_edge;
    std::set<VertexId> verts;
    std::set<Edge> all_edges;
    for (int i = 0; i < static_cast<int>(side.size()); ++i)
      for (int a = 0; a < 3; ++a) {
        verts.insert(side[i][a]);
        for (int b = a + 1; b < 3; ++b) {
          Edge e = make_edge(side[i][a], side[i][b]);
          all_edges.insert(e);
          by_edge[e].push_back(i);
        }
      }
    std::vector<char> seen(side.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          Edge e = make_edge(side[i][a], side[i][b]);
          if (equator_edges.count(e)) continue;
          for (int j : by_edge[e])
            if (!seen[j]) {
              seen[j] = 1;
              stack.push_back(j);
            }
        }
    }
    require(std::all_of(seen.begin(), seen.end(), [](char c) { return c; }),
            "expand: side " + which + " is not connected");
    // Every boundary edge (in exactly one side facet) must be an equator edge.
    for (auto& [e, fs] : by_edge) {
      if (fs.size() == 1)
        require(equator_edges.count(e),
                "expand: side " + which + " has a stray boundary edge");
      else
        require(fs.size() == 2 && !equator_edges.count(e),
                "expand: side " + which + " has a non-manifold or equator-crossing edge");
    }
    // Disc check: chi of the closed side must be 1.
    long long chi = static_cast<long long>(verts.size()) -
                    static_cast<long long>(all_edges.size()) +
                    static_cast<long long>(side.size());
    require(chi == 1, "expand: side " + which + " is not a disc (chi=" +
                          std::to_string(chi) + ")");
  } else {
    // dim 2: side facets are link edges; must form a simple arc whose
    // endpoints are the two equator vertices.
    std::map<VertexId, int> deg;
    for (const auto& f : side) {
      deg[f[0]]++;
      deg[f[1]]++;
    }
    int endpoints = 0;
    for (auto& [v, d] : deg) {
      require(d <= 2, "expand: side " + which + " revisits a vertex");
      if (d == 1) {
        ++endpoints;
        require(equator_vertices.count(v),
                "expand: side " + which + " endpoint off the equator");
      }
    }
    require(endpoints == 2, "expand: side " + which + " is not an arc");
    // connectivity: arcs with all degrees <= 2 and 2 endpoints are connected
    // iff the edge count equals vertex count - 1.
    require(static_cast<long long>(side.size()) ==
                static_cast<long long>(deg.size()) - 1,
            "expand: side " + which + " is disconnected");
  }
}

SplitSides compute_sides(const Triangulation& t, VertexId v,
                         const std::vector<Tri>& side_new_ids) {
  SplitSides s;
  std::vector<Tri> link = t.link_facets(v);
  std::set<Tri> link_set(link.begin(), link.end());
  std::set<Tri> new_set;
  for (const auto& f : side_new_ids) {
    require(link_set.count(f), "expand: listed facet is not in the link");
    require(!new_set.count(f), "expand: facet listed twice");
    new_set.insert(f);
  }
  for (const auto& f : link) {
    if (new_set.count(f))
      s.side_new.push_back(f);
    else
      s.side_keep.push_back(f);
  }

  if (t.dim() == 3) {
    // equator edges: in exactly one facet of each side
    std::map<Edge, std::pair<int, int>> count;  // (keep, new)
    for (const auto& f : s.side_keep)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          count[make_edge(f[a], f[b])].first++;
    for (const auto& f : s.side_new)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          count[make_edge(f[a], f[b])].second++;
    for (auto& [e, c] : count) {
      require(c.first + c.second == 2,
              "expand: link is not a closed surface at an edge");
      if (c.first == 1 && c.second == 1) s.equator.push_back(e);
    }
    // equator must be a single simple cycle
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& e : s.equator) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
    require(!s.equator.empty(), "expand: empty equator");
    for (auto& [w, nb] : adj) {
      require(nb.size() == 2, "expand: equator vertex of degree != 2");
      s.equator_v.push_back(w);
    }
    std::set<VertexId> seen;
    std::vector<VertexId> stack{s.equator[0][0]};
    seen.insert(stack[0]);
    while (!stack.empty()) {
      VertexId w = stack.back();
      stack.pop_back();
      for (VertexId u : adj[w])
        if (!seen.count(u)) {
          seen.insert(u);
          stack.push_back(u);
        }
    }
    require(seen.size() == adj.size(), "expand: equator is not a single cycle");
  } else {
    // dim 2: link facets are edges; equator vertices are those covered by
    // both sides.
    std::set<VertexId> in_keep, in_new;
    for (const auto& f : s.side_keep) {
      in_keep.insert(f[0]);
      in_keep.insert(f[1]);
    }
    for (const auto& f : s.side_new) {
      in_new.insert(f[0]);
      in_new.insert(f[1]);
    }
    for (VertexId w : in_keep)
      if (in_new.count(w)) s.equator_v.push_back(w);
    require(s.equator_v.size() == 2,
            "expand: equator must be exactly two vertices, got " +
                std::to_string(s.equator_v.size()));
  }

  std::set<Edge> eset(s.equator.begin(), s.equator.end());
  std::set<VertexId> evset(s.equator_v.begin(), s.equator_v.end());
  verify_side_disc(t, s.side_keep, eset, evset, "A");
  verify_side_disc(t, s.side_new, eset, evset, "B");
  return s;
}

}  // namespace

ExpandResult expand(const Triangulation& t, const ExpandData& d) {
  VertexId v = resolve(t, d.vertex);
  std::vector<Tri> side_new_ids;
  for (const auto& facet : d.side_new) {
    require(static_cast<int>(facet.size()) == t.dim(),
            "expand: facet arity mismatch");
    Tri f{kNoVertex, kNoVertex, kNoVertex};
    for (std::size_t i = 0; i < facet.size(); ++i)
      f[i] = resolve(t, facet[i]);
    std::sort(f.begin(), f.begin() + t.dim());
    side_new_ids.push_back(f);
  }
  SplitSides sides = compute_sides(t, v, side_new_ids);

  std::string new_label = d.new_vertex.empty() ? t.fresh_label() : d.new_vertex;
  require(!t.vertex_by_label(new_label).has_value(),
          "expand: label already in use: " + new_label);

  auto labels = t.label_table();
  // Reuse a dormant id carrying this label (the contract/expand round trip
  // then restores the complex bit-exactly); otherwise append a fresh id.
  VertexId w = kNoVertex;
  for (VertexId id = 0; id < static_cast<VertexId>(labels.size()); ++id)
    if (labels[id] == new_label && !t.has_vertex(id)) {
      w = id;
      break;
    }
  if (w == kNoVertex) {
    w = static_cast<VertexId>(labels.size());
    labels.push_back(new_label);
  }

  std::set<Tri> new_set(sides.side_new.begin(), sides.side_new.end());
  std::vector<Tet> tops;
  for (const auto& top : t.tops()) {
    bool at_v = false;
    for (int i = 0; i <= t.dim(); ++i) at_v |= top[i] == v;
    if (!at_v) {
      tops.push_back(top);
      continue;
    }
    Tri f{kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (int i = 0; i <= t.dim(); ++i)
      if (top[i] != v) f[k++] = top[i];
    if (new_set.count(f)) {
      Tet nt = top;
      for (int i = 0; i <= t.dim(); ++i)
        if (nt[i] == v) nt[i] = w;
      std::sort(nt.begin(), nt.begin() + t.dim() + 1);
      tops.push_back(nt);
    } else {
      tops.push_back(top);
    }
  }
  if (t.dim() == 3) {
    for (const auto& e : sides.equator)
      tops.push_back(make_tet(v, w, e[0], e[1]));
  } else {
    for (VertexId x : sides.equator_v) {
      Tet nt{v, w, x, kNoVertex};
      std::sort(nt.begin(), nt.begin() + 3);
      tops.push_back(nt);
    }
  }
  Triangulation result(t.dim(), std::move(tops), std::move(labels));
  return ExpandResult{std::move(result), new_label,
                      Move::contraction(d.vertex, new_label)};
}

ApplyResult apply_move(const Triangulation& t, const Move& m) {
  if (m.kind == Move::Kind::kContract) {
    auto r = contract(t, m.keep, m.remove);
    return ApplyResult{std::move(r.result), std::move(r.inverse)};
  }
  auto r = expand(t, m.expand);
  return ApplyResult{std::move(r.result), std::move(r.inverse)};
}

Triangulation replay(const Triangulation& start,
                     const std::vector<Move>& moves) {
  Triangulation cur = start;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    try {
      cur = apply_move(cur, moves[i]).result;
    } catch (const DomainError& e) {
      throw DomainError("replay: move " + std::to_string(i) +
                        " rejected: " + e.what());
    }
  }
  return cur;
}

ReplayLog replay_logged(const Triangulation& start,
                        const std::vector<Move>& moves) {
  Triangulation cur = start;
  std::vector<Move> inv;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    try {
      auto r = apply_move(cur, moves[i]);
      cur = std::move(r.result);
      inv.push_back(std::move(r.inverse));
    } catch (const DomainError& e) {
      throw DomainError("replay: move " + std::to_string(i) +
                        " rejected: " + e.what());
    }
  }
  std::reverse(inv.begin(), inv.end());
  return ReplayLog{std::move(cur), std::move(inv)};
}

namespace {

// Simple cycles of the link graph of v, each reported once (smallest vertex
// first, smaller second-neighbour direction).
std::vector<std::vector<VertexId>> link_cycles(const Triangulation& t,
                                               VertexId v, int max_cycles) {
  std::vector<VertexId> lv = t.link_vertices(v);
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const Edge& e : t.link_edges(v)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (auto& [w, nb] : adj) std::sort(nb.begin(), nb.end());

  std::vector<std::vector<VertexId>> cycles;
  std::vector<VertexId> path;
  std::set<VertexId> on_path;

  // DFS from each root r, only visiting vertices > r; close back to r.
  std::function<void(VertexId, VertexId)> dfs = [&](VertexId r, VertexId cur) {
    if (static_cast<int>(cycles.size()) > max_cycles)
      throw BudgetError("enumerate_expansions: too many equator cycles");
    for (VertexId nxt : adj[cur]) {
      if (nxt == r && path.size() >= 3) {
        if (path[1] < path.back()) cycles.push_back(path);
        continue;
      }
      if (nxt <= r || on_path.count(nxt)) continue;
      path.push_back(nxt);
      on_path.insert(nxt);
      dfs(r, nxt);
      path.pop_back();
      on_path.erase(nxt);
    }
  };
  for (VertexId r : lv) {
    path.assign(1, r);
    on_path = {r};
    dfs(r, r);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::vector<ExpandData> enumerate_expansions(const Triangulation& t, VertexId v,
                                              int max_cycles) {
  require(t.has_vertex(v), "enumerate_expansions: unknown vertex");
  std::vector<ExpandData> out;
  std::vector<Tri> link = t.link_facets(v);

  auto push_split = [&](const std::vector<int>& side_b) {
    ExpandData d;
    d.vertex = t.label(v);
    for (int i : side_b) {
      std::vector<std::string> facet;
      for (int a = 0; a < t.dim(); ++a) facet.push_back(t.label(link[i][a]));
      std::sort(facet.begin(), facet.end());
      d.side_new.push_back(std::move(facet));
    }
    std::sort(d.side_new.begin(), d.side_new.end());
    out.push_back(std::move(d));
  };

  if (t.dim() == 3) {
    for (const auto& cyc : link_cycles(t, v, max_cycles)) {
      std::set<Edge> ceset;
      for (std::size_t i = 0; i < cyc.size(); ++i)
        ceset.insert(make_edge(cyc[i], cyc[(i + 1) % cyc.size()]));
      // facet components under adjacency avoiding cycle edges
      std::map<Edge, std::vector<int>> by_edge;
      for (int i = 0; i < static_cast<int>(link.size()); ++i)
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b)
            by_edge[make_edge(link[i][a], link[i][b])].push_back(i);
      std::vector<int> comp(link.size(), -1);
      int ncomp = 0;
      for (int i = 0; i < static_cast<int>(link.size()); ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
          int j = stack.back();
          stack.pop_back();
          for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
              Edge e = make_edge(link[j][a], link[j][b]);
              if (ceset.count(e)) continue;
              for (int k : by_edge[e])
                if (comp[k] < 0) {
                  comp[k] = ncomp;
                  stack.push_back(k);
                }
            }
        }
        ++ncomp;
      }
      if (ncomp != 2) continue;  // cycle does not split the link cleanly
      for (int side = 0; side < 2; ++side) {
        std::vector<int> side_b;
        for (int i = 0; i < static_cast<int>(link.size()); ++i)
          if (comp[i] == side) side_b.push_back(i);
        push_split(side_b);
      }
    }
  } else {
    // dim 2: link is a cycle of edges; choose two distinct cut vertices,
    // side B = one of the two arcs between them.
    std::vector<VertexId> lv = t.link_vertices(v);
    std::map<VertexId, std::vector<int>> at;
    for (int i = 0; i < static_cast<int>(link.size()); ++i) {
      at[link[i][0]].push_back(i);
      at[link[i][1]].push_back(i);
    }
    for (std::size_t x = 0; x < lv.size(); ++x)
      for (std::size_t y = x + 1; y < lv.size(); ++y) {
        // arcs between lv[x] and lv[y]: split link edges into two classes by
        // walking the cycle.
        std::vector<int> arc;
        std::set<int> used;
        VertexId cur = lv[x];
        int cur_edge = at[cur][0];
        // walk one way
        while (true) {
          arc.push_back(cur_edge);
          used.insert(cur_edge);
          VertexId nxt = link[cur_edge][0] == cur ? link[cur_edge][1]
                                                  : link[cur_edge][0];
          if (nxt == lv[y]) break;
          cur = nxt;
          cur_edge = at[cur][0] == cur_edge ? at[cur][1] : at[cur][0];
        }
        std::vector<int> other;
        for (int i = 0; i < static_cast<int>(link.size()); ++i)
          if (!used.count(i)) other.push_back(i);
        if (arc.empty() || other.empty()) continue;
        push_split(arc);
        push_split(other);
      }
  }
  // Validate each enumerated expansion; all must be applicable by contract.
  std::sort(out.begin(), out.end(),
            [](const ExpandData& a, const ExpandData& b) {
              return a.side_new < b.side_new;
            });
  return out;
}

std::vector<Move> available_moves(const Triangulation& t,
                                  int max_cycles_per_vertex) {
  std::vector<Move> out;
  for (const Edge& e : t.edges())
    if (is_contractible(t, e)) {
      const std::string& la = t.label(e[0]);
      const std::string& lb = t.label(e[1]);
      out.push_back(Move::contraction(std::min(la, lb), std::max(la, lb)));
    }
  for (VertexId v : t.vertices()) {
    auto es = enumerate_expansions(t, v, max_cycles_per_vertex);
    // one orientation per equator: keep the first of each complementary pair
    std::set<std::vector<std::vector<std::string>>> seen;
    for (auto& d : es) {
      // complement key: the side_new of the partner is the complement; dedupe
      // by unordered pair via the smaller of (side_new, complement signature).
      auto key = d.side_new;
      if (seen.count(key)) continue;
      // compute complement
      std::vector<std::vector<std::string>> comp;
      std::set<std::vector<std::string>> mine(d.side_new.begin(),
                                              d.side_new.end());
      for (const auto& f : t.link_facets(v)) {
        std::vector<std::string> lab;
        for (int a = 0; a < t.dim(); ++a) lab.push_back(t.label(f[a]));
        std::sort(lab.begin(), lab.end());
        if (!mine.count(lab)) comp.push_back(lab);
      }
      std::sort(comp.begin(), comp.end());
      seen.insert(comp);
      seen.insert(key);
      out.push_back(Move::expansion(d));
    }
  }
  return out;
}

std::vector<Move> expansion_path_to_subdivision(const Triangulation& t) {
  std::vector<Move> moves;
  Triangulation cur = t;

  auto apply = [&](ExpandData d) {
    auto r = expand(cur, d);
    cur = std::move(r.result);
    d.new_vertex = r.new_vertex;
    moves.push_back(Move::expansion(std::move(d)));
  };

  auto center_label = [&](const std::vector<VertexId>& s, int d) {
    std::string lab = "c" + std::to_string(d) + "(";
    for (std::size_t i = 0; i < s.size(); ++i)
      lab += (i ? "." : "") + t.label(s[i]);
    return lab + ")";
  };

  // Star-split every top simplex.
  for (const auto& top : t.tops()) {
    ExpandData d;
    VertexId v = top[0];
    d.vertex = t.label(v);
    d.new_vertex = center_label(
        std::vector<VertexId>(top.begin(), top.begin() + t.dim() + 1), t.dim());
    std::vector<std::string> facet;
    for (int i = 1; i <= t.dim(); ++i) facet.push_back(t.label(top[i]));
    std::sort(facet.begin(), facet.end());
    d.side_new.push_back(facet);
    apply(std::move(d));
  }
  // Then every original (dim-1)-face.
  if (t.dim() == 3) {
    for (const auto& f : t.triangles()) {
      ExpandData d;
      VertexId v = f[0];
      d.vertex = t.label(v);
      d.new_vertex = center_label({f[0], f[1], f[2]}, 2);
      // side B: current link facets of v containing both other vertices
      VertexId vv = *cur.vertex_by_label(d.vertex);
      for (const auto& lf : cur.link_facets(vv)) {
        bool hb = false, hc = false;
        for (int a = 0; a < 3; ++a) {
          hb |= lf[a] == *cur.vertex_by_label(t.label(f[1]));
          hc |= lf[a] == *cur.vertex_by_label(t.label(f[2]));
        }
        if (hb && hc) {
          std::vector<std::string> lab;
          for (int a = 0; a < 3; ++a) lab.push_back(cur.label(lf[a]));
          std::sort(lab.begin(), lab.end());
          d.side_new.push_back(lab);
        }
      }
      std::sort(d.side_new.begin(), d.side_new.end());
      apply(std::move(d));
    }
  }
  // Then every original edge.
  for (const auto& e : t.edges()) {
    ExpandData d;
    d.vertex = t.label(e[0]);
    d.new_vertex = center_label({e[0], e[1]}, 1);
    VertexId vv = *cur.vertex_by_label(d.vertex);
    VertexId ww = *cur.vertex_by_label(t.label(e[1]));
    for (const auto& lf : cur.link_facets(vv)) {
      bool hw = false;
      for (int a = 0; a < cur.dim(); ++a) hw |= lf[a] == ww;
      if (hw) {
        std::vector<std::string> lab;
        for (int a = 0; a < cur.dim(); ++a) lab.push_back(cur.label(lf[a]));
        std::sort(lab.begin(), lab.end());
        d.side_new.push_back(lab);
      }
    }
    std::sort(d.side_new.begin(), d.side_new.end());
    apply(std::move(d));
  }
  return moves;
}

TransportResult transport_replay(
    const Triangulation& from, const std::vector<Move>& moves,
    const Triangulation& start,
    const std::unordered_map<VertexId, VertexId>& vertex_map) {
  // label bijection, maintained as moves replay on both sides
  std::unordered_map<std::string, std::string> beta;
  for (auto& [a, b] : vertex_map) beta[from.label(a)] = start.label(b);

  Triangulation src = from;
  Triangulation dst = start;
  std::vector<Move> out;
  for (const Move& m : moves) {
    if (m.kind == Move::Kind::kContract) {
      Move tm = Move::contraction(beta.at(m.keep), beta.at(m.remove));
      src = apply_move(src, m).result;
      dst = apply_move(dst, tm).result;
      out.push_back(std::move(tm));
    } else {
      ExpandData td;
      td.vertex = beta.at(m.expand.vertex);
      for (const auto& facet : m.expand.side_new) {
        std::vector<std::string> tf;
        for (const auto& lab : facet) tf.push_back(beta.at(lab));
        std::sort(tf.begin(), tf.end());
        td.side_new.push_back(std::move(tf));
      }
      std::sort(td.side_new.begin(), td.side_new.end());
      auto rs = expand(src, m.expand);
      src = std::move(rs.result);
      auto rd = expand(dst, td);
      dst = std::move(rd.result);
      beta[rs.new_vertex] = rd.new_vertex;
      td.new_vertex = rd.new_vertex;
      out.push_back(Move::expansion(std::move(td)));
    }
  }
  return TransportResult{std::move(out), std::move(dst)};
}

DistanceResult bfs_distance(const Triangulation& t1, const Triangulation& t2,
                            int max_depth, long long max_states) {
  DistanceResult res;
  struct Node {
    Triangulation t;
    int parent;  // index into the same side's node list
    Move move;   // move applied at parent to reach this node
  };

  std::string s1 = iso_signature(t1);
  std::string s2 = iso_signature(t2);
  if (s1 == s2) {
    res.status = DistanceResult::Status::kFound;
    return res;
  }

  // side 0 grows from t1, side 1 from t2
  std::vector<std::vector<Node>> nodes(2);
  std::vector<std::unordered_map<std::string, int>> seen(2);
  nodes[0].push_back({t1, -1, Move{}});
  nodes[1].push_back({t2, -1, Move{}});
  seen[0][s1] = 0;
  seen[1][s2] = 0;
  std::vector<std::deque<int>> frontier(2);
  frontier[0].push_back(0);
  frontier[1].push_back(0);
  std::vector<int> depth_used(2, 0);
  long long explored = 0;

  auto splice = [&](int fwd_node, int bwd_node,
                    const Move* bridge) -> std::vector<Move> {
    // path t1 -> meet
    std::vector<Move> fwd;
    for (int i = fwd_node; nodes[0][i].parent >= 0; i = nodes[0][i].parent)
      fwd.push_back(nodes[0][i].move);
    std::reverse(fwd.begin(), fwd.end());
    if (bridge) fwd.push_back(*bridge);
    Triangulation meet = replay(t1, fwd);
    // path t2 -> meet', then invert and transport onto meet
    std::vector<Move> bwd;
    for (int i = bwd_node; nodes[1][i].parent >= 0; i = nodes[1][i].parent)
      bwd.push_back(nodes[1][i].move);
    std::reverse(bwd.begin(), bwd.end());
    auto log = replay_logged(t2, bwd);  // endpoint == meet' (iso to meet)
    auto phi = isomorphic(log.endpoint, meet);
    check_internal(phi.has_value(), "bfs splice: meet states not isomorphic");
    auto tr = transport_replay(log.endpoint, log.inverse, meet, *phi);
    for (auto& m : tr.moves) fwd.push_back(std::move(m));
    return fwd;
  };

  while (!frontier[0].empty() || !frontier[1].empty()) {
    // Expand the smaller frontier first.
    int side = frontier[0].empty() ? 1
               : frontier[1].empty()
                   ? 0
                   : (frontier[0].size() <= frontier[1].size() ? 0 : 1);
    if (depth_used[0] + depth_used[1] >= max_depth) {
      res.status = DistanceResult::Status::kNoPathWithinDepth;
      res.explored = explored;
      return res;
    }
    ++depth_used[side];
    std::deque<int> level = std::move(frontier[side]);
    frontier[side].clear();
    for (int ni : level) {
      std::vector<Move> ms;
      try {
        ms = available_moves(nodes[side][ni].t);
      } catch (const BudgetError&) {
        res.status = DistanceResult::Status::kBudgetExhausted;
        res.explored = explored;
        return res;
      }
      for (const Move& m : ms) {
        Triangulation nt = apply_move(nodes[side][ni].t, m).result;
        std::string sig;
        try {
          sig = iso_signature(nt);
        } catch (const BudgetError&) {
          continue;
        }
        if (seen[side].count(sig)) continue;
        if (++explored > max_states) {
          res.status = DistanceResult::Status::kBudgetExhausted;
          res.explored = explored;
          return res;
        }
        int idx = static_cast<int>(nodes[side].size());
        nodes[side].push_back({nt, ni, m});
        seen[side][sig] = idx;
        auto hit = seen[1 - side].find(sig);
        if (hit != seen[1 - side].end()) {
          res.status = DistanceResult::Status::kFound;
          res.explored = explored;
          res.moves = side == 0 ? splice(idx, hit->second, nullptr)
                                : splice(hit->second, idx, nullptr);
          return res;
        }
        frontier[side].push_back(idx);
      }
    }
  }
  res.status = DistanceResult::Status::kNoPathWithinDepth;
  res.explored = explored;
  return res;
}

}  // namespace p3
