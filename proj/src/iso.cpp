#include "p3/iso.hpp"

#include <algorithm>
#include <map>

namespace p3 {

namespace {

// Stable color refinement. Seed color: vertex degree (top count). Refinement
// step: multiset of (neighbour color, degree of the connecting edge).
std::unordered_map<VertexId, std::uint64_t> refine_colors(
    const Triangulation& t) {
  std::unordered_map<VertexId, std::uint64_t> color;
  for (VertexId v : t.vertices())
    color[v] = static_cast<std::uint64_t>(t.tops_at(v).size());
  for (int round = 0; round < 16; ++round) {
    std::unordered_map<VertexId, std::uint64_t> next;
    std::size_t classes_before = [&] {
      std::set<std::uint64_t> s;
      for (auto& [v, c] : color) s.insert(c);
      return s.size();
    }();
    for (VertexId v : t.vertices()) {
      std::vector<std::uint64_t> sig;
      for (VertexId w : t.link_vertices(v)) {
        std::uint64_t e = static_cast<std::uint64_t>(
            t.edge_degree(make_edge(v, w)));
        sig.push_back(color.at(w) * 1000003ull + e);
      }
      std::sort(sig.begin(), sig.end());
      std::uint64_t h = color.at(v);
      h = fnv1a64(&h, sizeof h);
      for (auto s : sig) h = fnv1a64(&s, sizeof s, h);
      next[v] = h;
    }
    std::size_t classes_after = [&] {
      std::set<std::uint64_t> s;
      for (auto& [v, c] : next) s.insert(c);
      return s.size();
    }();
    color = std::move(next);
    if (classes_after == classes_before) break;
  }
  return color;
}

struct CanonState {
  const Triangulation* t;
  long long nodes = 0;
  long long max_nodes = 0;
  std::string best;
  bool have_best = false;
};

// Deterministic greedy completion of a partial labeling; branches on ties.
void complete_labeling(CanonState& st,
                       std::unordered_map<VertexId, int>& label,
                       int next_label,
                       const std::unordered_map<VertexId, std::uint64_t>& color) {
  const Triangulation& t = *st.t;
  if (++st.nodes > st.max_nodes)
    throw BudgetError("iso_signature: branching budget exhausted");

  if (static_cast<int>(label.size()) == t.vertex_count()) {
    // Encode: sorted relabeled top list.
    std::vector<Tet> tops;
    for (const auto& top : t.tops()) {
      Tet nt{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
      for (int i = 0; i <= t.dim(); ++i) nt[i] = label.at(top[i]);
      std::sort(nt.begin(), nt.begin() + t.dim() + 1);
      tops.push_back(nt);
    }
    std::sort(tops.begin(), tops.end());
    std::string enc;
    enc.reserve(tops.size() * 12);
    for (const auto& nt : tops) {
      for (int i = 0; i <= t.dim(); ++i) {
        enc += std::to_string(nt[i]);
        enc += ',';
      }
      enc += ';';
    }
    if (!st.have_best || enc < st.best) {
      st.best = std::move(enc);
      st.have_best = true;
    }
    return;
  }

  // Pick the extension rule: among tops with at least one unlabeled vertex,
  // maximize labeled count, then minimize the sorted labeled tuple.
  int best_count = -1;
  std::vector<int> best_key;
  std::vector<int> chosen;  // candidate top indices tied on the key
  for (int i = 0; i < t.top_count(); ++i) {
    const Tet& top = t.tops()[i];
    std::vector<int> labs;
    int unlab = 0;
    for (int a = 0; a <= t.dim(); ++a) {
      auto it = label.find(top[a]);
      if (it == label.end())
        ++unlab;
      else
        labs.push_back(it->second);
    }
    if (unlab == 0) continue;
    std::sort(labs.begin(), labs.end());
    int count = static_cast<int>(labs.size());
    if (count > best_count || (count == best_count && labs < best_key)) {
      best_count = count;
      best_key = labs;
      chosen.assign(1, i);
    } else if (count == best_count && labs == best_key) {
      chosen.push_back(i);
    }
  }
  check_internal(!chosen.empty(), "labeling stuck on connected complex");

  // Branch over every tied top and every order of its unlabeled vertices.
  for (int i : chosen) {
    const Tet& top = t.tops()[i];
    std::vector<VertexId> un;
    for (int a = 0; a <= t.dim(); ++a)
      if (!label.count(top[a])) un.push_back(top[a]);
    std::sort(un.begin(), un.end());
    do {
      for (std::size_t k = 0; k < un.size(); ++k)
        label[un[k]] = next_label + static_cast<int>(k);
      complete_labeling(st, label, next_label + static_cast<int>(un.size()),
                        color);
      for (VertexId v : un) label.erase(v);
    } while (std::next_permutation(un.begin(), un.end()));
  }
}

}  // namespace

std::string iso_signature(const Triangulation& t, long long max_nodes) {
  require(t.top_count() > 0, "iso_signature of empty complex");
  auto color = refine_colors(t);

  // Root candidates: tops whose sorted color tuple is minimal.
  std::vector<std::uint64_t> best_key;
  std::vector<int> roots;
  for (int i = 0; i < t.top_count(); ++i) {
    std::vector<std::uint64_t> key;
    for (int a = 0; a <= t.dim(); ++a) key.push_back(color.at(t.tops()[i][a]));
    std::sort(key.begin(), key.end());
    if (roots.empty() || key < best_key) {
      best_key = key;
      roots.assign(1, i);
    } else if (key == best_key) {
      roots.push_back(i);
    }
  }

  CanonState st;
  st.t = &t;
  st.max_nodes = max_nodes;
  for (int i : roots) {
    const Tet& top = t.tops()[i];
    std::vector<VertexId> vs(top.begin(), top.begin() + t.dim() + 1);
    std::sort(vs.begin(), vs.end());
    do {
      std::unordered_map<VertexId, int> label;
      for (std::size_t k = 0; k < vs.size(); ++k)
        label[vs[k]] = static_cast<int>(k);
      complete_labeling(st, label, static_cast<int>(vs.size()), color);
    } while (std::next_permutation(vs.begin(), vs.end()));
  }
  check_internal(st.have_best, "no canonical labeling produced");
  return std::to_string(t.dim()) + ":" + std::to_string(t.vertex_count()) +
         ":" + st.best;
}

namespace {

struct IsoState {
  const Triangulation* t1;
  const Triangulation* t2;
  std::unordered_map<VertexId, VertexId> fwd;
  std::unordered_map<VertexId, VertexId> bwd;
  std::unordered_map<VertexId, std::uint64_t> c1, c2;
  long long nodes = 0;
};

bool extend(IsoState& st) {
  if (++st.nodes > 50000000)
    throw BudgetError("isomorphic: search budget exhausted");
  const Triangulation& t1 = *st.t1;
  const Triangulation& t2 = *st.t2;
  if (static_cast<int>(st.fwd.size()) == t1.vertex_count()) return true;

  // Most-constrained unmapped vertex of t1: prefer one adjacent to the
  // mapped region, smallest color class.
  VertexId pick = kNoVertex;
  int pick_score = -1;
  for (VertexId v : t1.vertices()) {
    if (st.fwd.count(v)) continue;
    int adj = 0;
    for (VertexId w : t1.link_vertices(v))
      if (st.fwd.count(w)) ++adj;
    if (adj > pick_score) {
      pick_score = adj;
      pick = v;
    }
  }
  check_internal(pick != kNoVertex, "iso extend: nothing to pick");

  // Candidate images: same color, unused, adjacency-consistent.
  std::vector<VertexId> mapped_nb;
  for (VertexId w : t1.link_vertices(pick))
    if (st.fwd.count(w)) mapped_nb.push_back(w);

  for (VertexId u : t2.vertices()) {
    if (st.bwd.count(u)) continue;
    if (st.c1.at(pick) != st.c2.at(u)) continue;
    bool ok = true;
    for (VertexId w : mapped_nb) {
      Edge e1 = make_edge(pick, w);
      Edge e2 = make_edge(u, st.fwd.at(w));
      if (!t2.has_edge(e2) ||
          t1.edge_degree(e1) != t2.edge_degree(e2)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    st.fwd[pick] = u;
    st.bwd[u] = pick;
    if (extend(st)) return true;
    st.fwd.erase(pick);
    st.bwd.erase(u);
  }
  return false;
}

}  // namespace

std::optional<std::unordered_map<VertexId, VertexId>> isomorphic(
    const Triangulation& t1, const Triangulation& t2) {
  if (t1.dim() != t2.dim() || t1.top_count() != t2.top_count() ||
      t1.f_vector() != t2.f_vector())
    return std::nullopt;
  IsoState st;
  st.t1 = &t1;
  st.t2 = &t2;
  st.c1 = refine_colors(t1);
  st.c2 = refine_colors(t2);
  // Compare color multisets.
  std::vector<std::uint64_t> m1, m2;
  for (auto& [v, c] : st.c1) m1.push_back(c);
  for (auto& [v, c] : st.c2) m2.push_back(c);
  std::sort(m1.begin(), m1.end());
  std::sort(m2.begin(), m2.end());
  if (m1 != m2) return std::nullopt;

  if (!extend(st)) return std::nullopt;
  // Verify the map carries tops to tops.
  for (const auto& top : t1.tops()) {
    Tet img{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    for (int i = 0; i <= t1.dim(); ++i) img[i] = st.fwd.at(top[i]);
    std::sort(img.begin(), img.begin() + t1.dim() + 1);
    check_internal(t2.has_top(img), "iso verification failed");
  }
  return st.fwd;
}

}  // namespace p3
