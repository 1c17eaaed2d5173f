#include "p3/cellcomplex.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "p3/canon.hpp"
#include "p3/iso.hpp"

namespace p3 {

CellComplex::CellComplex(std::vector<Cell> cells) : cells_(std::move(cells)) {
  cofaces_.resize(cells_.size());
  for (int i = 0; i < cell_count(); ++i) {
    if (cells_[i].name.empty()) cells_[i].name = "c" + std::to_string(i);
    dim_ = std::max(dim_, cells_[i].dim);
    for (auto& [f, m] : cells_[i].boundary) {
      require(f >= 0 && f < cell_count(), "boundary id out of range");
      require(m > 0, "non-positive boundary multiplicity");
      cofaces_[f].push_back(i);
    }
  }
  std::set<std::string> names;
  for (auto& c : cells_)
    require(names.insert(c.name).second, "duplicate cell name: " + c.name);
}

std::vector<int> CellComplex::cells_of_dim(int d) const {
  std::vector<int> out;
  for (int i = 0; i < cell_count(); ++i)
    if (cells_[i].dim == d) out.push_back(i);
  return out;
}

std::vector<int> CellComplex::f_vector() const {
  std::vector<int> f(dim_ + 1, 0);
  for (auto& c : cells_) f[c.dim]++;
  return f;
}

long long CellComplex::euler_characteristic() const {
  auto f = f_vector();
  long long chi = 0;
  for (int i = 0; i <= dim_; ++i) chi += (i % 2 ? -1 : 1) * f[i];
  return chi;
}

const std::vector<int>& CellComplex::cofaces(int cell) const {
  return cofaces_[cell];
}

std::vector<int> CellComplex::closure(int cell) const {
  std::set<int> seen{cell};
  std::vector<int> stack{cell};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (auto& [f, m] : cells_[c].boundary)
      if (seen.insert(f).second) stack.push_back(f);
  }
  return {seen.begin(), seen.end()};
}

std::optional<int> CellComplex::cell_by_name(const std::string& name) const {
  for (int i = 0; i < cell_count(); ++i)
    if (cells_[i].name == name) return i;
  return std::nullopt;
}

CellComplex::BoundaryCycle CellComplex::boundary_cycle(int two_cell) const {
  require(cells_[two_cell].dim == 2, "boundary_cycle: not a 2-cell");
  // Edge instances with multiplicity 1 each; walk the multigraph cycle.
  std::vector<int> edges;
  for (auto& [e, m] : cells_[two_cell].boundary) {
    require(m == 1, "boundary_cycle: edge with multiplicity " +
                        std::to_string(m) + " (irregular)");
    edges.push_back(e);
  }
  require(!edges.empty(), "boundary_cycle: empty boundary");
  std::map<int, std::vector<int>> at_vertex;  // vertex -> incident edge ids
  for (int e : edges) {
    require(cells_[e].dim == 1 && cells_[e].boundary.size() == 2,
            "boundary_cycle: boundary contains a non-edge or a loop");
    for (auto& [v, mv] : cells_[e].boundary) {
      require(mv == 1, "boundary_cycle: loop edge");
      at_vertex[v].push_back(e);
    }
  }
  for (auto& [v, es] : at_vertex)
    require(es.size() == 2,
            "boundary_cycle: boundary is not a simple cycle at vertex " +
                cells_[v].name);

  BoundaryCycle cyc;
  std::set<int> used;
  int e0 = *std::min_element(edges.begin(), edges.end());
  int v0 = cells_[e0].boundary.begin()->first;
  int v = v0;
  int e = e0;
  do {
    cyc.vertices.push_back(v);
    cyc.edges.push_back(e);
    used.insert(e);
    // step: other endpoint of e, then the other edge there
    int w = -1;
    for (auto& [x, mx] : cells_[e].boundary)
      if (x != v) w = x;
    check_internal(w >= 0, "boundary_cycle: walk failed");
    const auto& es = at_vertex[w];
    int ne = es[0] == e ? es[1] : es[0];
    v = w;
    e = ne;
  } while (v != v0);
  require(used.size() == edges.size(),
          "boundary_cycle: boundary is not a single cycle");
  return cyc;
}

CellCheck check_graded(const CellComplex& c) {
  CellCheck r;
  for (int i = 0; i < c.cell_count(); ++i) {
    const auto& cell = c.cells()[i];
    if (cell.dim == 0 && !cell.boundary.empty()) {
      r.graded = false;
      r.issues.push_back("vertex " + cell.name + " has a boundary");
    }
    if (cell.dim > 0 && cell.boundary.empty()) {
      r.graded = false;
      r.issues.push_back("cell " + cell.name + " has empty boundary");
    }
    for (auto& [f, m] : cell.boundary)
      if (c.cells()[f].dim != cell.dim - 1) {
        r.graded = false;
        r.issues.push_back("cell " + cell.name + " bounded by " +
                           c.cells()[f].name + " of dimension " +
                           std::to_string(c.cells()[f].dim));
      }
  }
  return r;
}

namespace {

// Incidences of edges in the boundary sphere of a 3-cell, with the vertex
// figure check (edges around each vertex of the boundary chained by the
// faces form a single cycle).
bool three_cell_boundary_is_sphere(const CellComplex& c, int X,
                                   std::string* why) {
  std::vector<int> faces;
  for (auto& [f, m] : c.cells()[X].boundary) {
    if (m != 1) {
      *why = "3-cell " + c.cells()[X].name + " meets 2-cell " +
             c.cells()[f].name + " with multiplicity " + std::to_string(m);
      return false;
    }
    faces.push_back(f);
  }
  std::map<int, std::vector<int>> faces_at_edge;
  std::set<int> vertices;
  for (int f : faces)
    for (auto& [e, m] : c.cells()[f].boundary) {
      for (int k = 0; k < m; ++k) faces_at_edge[e].push_back(f);
      for (auto& [v, mv] : c.cells()[e].boundary) vertices.insert(v);
    }
  for (auto& [e, fs] : faces_at_edge)
    if (fs.size() != 2) {
      *why = "edge " + c.cells()[e].name + " lies in " +
             std::to_string(fs.size()) + " boundary faces of " +
             c.cells()[X].name;
      return false;
    }
  long long chi = static_cast<long long>(vertices.size()) -
                  static_cast<long long>(faces_at_edge.size()) +
                  static_cast<long long>(faces.size());
  if (chi != 2) {
    *why = "boundary of " + c.cells()[X].name + " has chi " +
           std::to_string(chi);
    return false;
  }
  // connectivity over face adjacency
  std::map<int, std::vector<int>> adj;
  for (auto& [e, fs] : faces_at_edge) {
    adj[fs[0]].push_back(fs[1]);
    adj[fs[1]].push_back(fs[0]);
  }
  std::set<int> seen{faces[0]};
  std::vector<int> stack{faces[0]};
  while (!stack.empty()) {
    int f = stack.back();
    stack.pop_back();
    for (int g : adj[f])
      if (seen.insert(g).second) stack.push_back(g);
  }
  if (seen.size() != faces.size()) {
    *why = "boundary of " + c.cells()[X].name + " is disconnected";
    return false;
  }
  // vertex figures: at each vertex, edges chained by faces form one cycle
  for (int v : vertices) {
    // local flags: (edge at v, face) pairs
    std::map<int, std::vector<int>> edges_of_face_at_v;  // face -> edges at v
    std::set<int> local_edges;
    for (int f : faces)
      for (auto& [e, m] : c.cells()[f].boundary)
        if (c.cells()[e].boundary.count(v)) {
          edges_of_face_at_v[f].push_back(e);
          local_edges.insert(e);
        }
    std::map<int, std::vector<int>> edge_adj;
    for (auto& [f, es] : edges_of_face_at_v) {
      if (es.size() != 2) {
        *why = "face " + c.cells()[f].name + " touches vertex " +
               c.cells()[v].name + " with " + std::to_string(es.size()) +
               " edges";
        return false;
      }
      edge_adj[es[0]].push_back(es[1]);
      edge_adj[es[1]].push_back(es[0]);
    }
    for (auto& [e, nb] : edge_adj)
      if (nb.size() != 2) {
        *why = "vertex figure of " + c.cells()[v].name + " in " +
               c.cells()[X].name + " is not a cycle";
        return false;
      }
    std::set<int> vis;
    std::vector<int> st{*local_edges.begin()};
    vis.insert(st[0]);
    while (!st.empty()) {
      int e = st.back();
      st.pop_back();
      for (int g : edge_adj[e])
        if (vis.insert(g).second) st.push_back(g);
    }
    if (vis.size() != local_edges.size()) {
      *why = "vertex figure of " + c.cells()[v].name + " in " +
             c.cells()[X].name + " is disconnected";
      return false;
    }
  }
  return true;
}

}  // namespace

CellCheck check_regular(const CellComplex& c) {
  CellCheck r = check_graded(c);
  if (!r.graded) {
    r.regular = false;
    return r;
  }
  for (int i = 0; i < c.cell_count(); ++i) {
    const auto& cell = c.cells()[i];
    if (cell.dim == 1) {
      bool ok = cell.boundary.size() == 2;
      for (auto& [v, m] : cell.boundary) ok = ok && m == 1;
      if (!ok) {
        r.regular = false;
        r.issues.push_back("edge " + cell.name +
                           " does not have two distinct endpoints");
      }
    } else if (cell.dim == 2) {
      try {
        c.boundary_cycle(i);
      } catch (const DomainError& e) {
        r.regular = false;
        r.issues.push_back(e.what());
      }
    } else if (cell.dim == 3) {
      std::string why;
      if (!three_cell_boundary_is_sphere(c, i, &why)) {
        r.regular = false;
        r.issues.push_back(why);
      }
    }
  }
  return r;
}

CellCheck check_simple(const CellComplex& c) {
  CellCheck r;
  int want_vertex_edges = c.dim() == 3 ? 4 : 3;
  int want_edge_faces = c.dim() == 3 ? 3 : 2;
  std::map<int, int> edges_at_vertex;
  std::map<int, int> faces_at_edge;
  for (int i = 0; i < c.cell_count(); ++i) {
    const auto& cell = c.cells()[i];
    if (cell.dim == 1)
      for (auto& [v, m] : cell.boundary) edges_at_vertex[v] += m;
    if (cell.dim == 2)
      for (auto& [e, m] : cell.boundary) faces_at_edge[e] += m;
  }
  for (int v : c.cells_of_dim(0)) {
    int d = edges_at_vertex.count(v) ? edges_at_vertex[v] : 0;
    if (d != want_vertex_edges) {
      r.simple = false;
      r.issues.push_back("vertex " + c.cells()[v].name + " meets " +
                         std::to_string(d) + " edges (want " +
                         std::to_string(want_vertex_edges) + ")");
    }
  }
  for (int e : c.cells_of_dim(1)) {
    int d = faces_at_edge.count(e) ? faces_at_edge[e] : 0;
    if (d != want_edge_faces) {
      r.simple = false;
      r.issues.push_back("edge " + c.cells()[e].name + " meets " +
                         std::to_string(d) + " 2-cells (want " +
                         std::to_string(want_edge_faces) + ")");
    }
  }
  return r;
}

CellComplex dual(const Triangulation& t) {
  require_valid(t, "dual");
  int d = t.dim();
  std::vector<CellComplex::Cell> cells;
  std::map<std::vector<VertexId>, int> id_of;  // simplex -> dual cell id

  auto add = [&](const std::vector<VertexId>& simplex, int cell_dim,
                 std::string name) {
    CellComplex::Cell c;
    c.dim = cell_dim;
    c.name = std::move(name);
    id_of[simplex] = static_cast<int>(cells.size());
    cells.push_back(std::move(c));
  };

  // dual vertices <- top simplices
  for (int i = 0; i < t.top_count(); ++i) {
    const Tet& top = t.tops()[i];
    std::vector<VertexId> s(top.begin(), top.begin() + d + 1);
    add(s, 0, "t" + std::to_string(i));
  }
  // dual edges <- (d-1)-simplices
  int en = 0;
  if (d == 3) {
    for (const auto& f : t.triangles())
      add({f[0], f[1], f[2]}, 1, "f" + std::to_string(en++));
  } else {
    for (const auto& e : t.edges()) add({e[0], e[1]}, 1, "f" + std::to_string(en++));
  }
  // dual 2-cells <- (d-2)-simplices
  int fn = 0;
  if (d == 3) {
    for (const auto& e : t.edges()) add({e[0], e[1]}, 2, "e" + std::to_string(fn++));
  } else {
    for (VertexId v : t.vertices()) add({v}, 2, "v" + t.label(v));
  }
  // dual 3-cells <- vertices (dim 3 only)
  if (d == 3)
    for (VertexId v : t.vertices()) add({v}, 3, "v" + t.label(v));

  // incidences: dual cell of simplex s has boundary = dual cells of the
  // simplices obtained by adding one vertex (cofacets).
  auto subsets_with_one_more = [&](const std::vector<VertexId>& s,
                                   int target_size) {
    // cofacets of s among simplices of size target_size present in t
    std::set<std::vector<VertexId>> out;
    for (int i : t.tops_at(s[0])) {
      const Tet& top = t.tops()[i];
      // all subsets of top of size target_size containing s
      std::vector<VertexId> verts(top.begin(), top.begin() + d + 1);
      std::vector<int> pick(verts.size(), 0);
      std::fill(pick.end() - target_size, pick.end(), 1);
      std::sort(pick.begin(), pick.end());
      do {
        std::vector<VertexId> sub;
        for (std::size_t k = 0; k < verts.size(); ++k)
          if (pick[k]) sub.push_back(verts[k]);
        bool contains = std::includes(sub.begin(), sub.end(), s.begin(), s.end());
        if (contains) out.insert(sub);
      } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return out;
  };

  for (auto& [s, id] : id_of) {
    int cd = cells[id].dim;  // dual dim
    if (cd == 0) continue;
    int simplex_size = static_cast<int>(s.size());
    auto cof = subsets_with_one_more(s, simplex_size + 1);
    for (auto& up : cof) {
      auto it = id_of.find(up);
      check_internal(it != id_of.end(), "dual: missing cofacet");
      cells[id].boundary[it->second] += 1;
    }
  }
  CellComplex out(std::move(cells));
  auto rg = check_regular(out);
  check_internal(rg.ok(), "dual: output not regular");
  return out;
}

Triangulation order_complex(const CellComplex& c) {
  auto rg = check_regular(c);
  require(rg.ok(), "order_complex: complex is not regular: " +
                       (rg.issues.empty() ? std::string("?") : rg.issues[0]));
  std::vector<std::string> labels;
  labels.reserve(c.cell_count());
  for (auto& cell : c.cells()) labels.push_back(cell.name);

  std::vector<Tet> tops;
  int d = c.dim();
  std::function<void(int, std::vector<VertexId>&)> down =
      [&](int cell, std::vector<VertexId>& chain) {
        chain.push_back(cell);
        if (c.cells()[cell].dim == 0) {
          Tet t{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
          for (std::size_t i = 0; i < chain.size(); ++i) t[i] = chain[i];
          std::sort(t.begin(), t.begin() + d + 1);
          tops.push_back(t);
        } else {
          for (auto& [f, m] : c.cells()[cell].boundary) down(f, chain);
        }
        chain.pop_back();
      };
  for (int top : c.cells_of_dim(d)) {
    std::vector<VertexId> chain;
    down(top, chain);
  }
  return Triangulation(d, std::move(tops), std::move(labels));
}

Delete2Result delete_2cell(const CellComplex& c, int two_cell) {
  require(two_cell >= 0 && two_cell < c.cell_count() &&
              c.cells()[two_cell].dim == 2,
          "delete_2cell: not a 2-cell");
  {
    auto s = check_simple(c);
    require(s.ok(), "delete_2cell: input complex is not simple: " +
                        (s.issues.empty() ? std::string("?") : s.issues[0]));
    auto rg = check_regular(c);
    require(rg.ok(), "delete_2cell: input complex is not regular");
  }
  require(c.dim() == 3, "delete_2cell: complex must be 3-dimensional");

  Delete2Result out;
  out.cell_deleted = two_cell;

  // two distinct incident 3-cells
  std::vector<int> xs;
  for (int X : c.cells_of_dim(3)) {
    auto it = c.cells()[X].boundary.find(two_cell);
    if (it != c.cells()[X].boundary.end()) {
      for (int k = 0; k < it->second; ++k) xs.push_back(X);
    }
  }
  require(xs.size() == 2, "delete_2cell: 2-cell must lie in two 3-cells");
  require(xs[0] != xs[1],
          "delete_2cell: 2-cell meets the same 3-cell twice; deletion would "
          "be irregular");
  out.merged_3cells = {xs[0], xs[1]};

  auto cyc = c.boundary_cycle(two_cell);
  out.boundary_vertices = static_cast<int>(cyc.vertices.size());
  std::set<int> arc_set(cyc.edges.begin(), cyc.edges.end());
  std::set<int> removed_vertices(cyc.vertices.begin(), cyc.vertices.end());

  // Per removed vertex: its two non-arc edges.
  std::map<int, std::array<int, 2>> halves_at;
  for (int w : removed_vertices) {
    std::vector<int> others;
    for (int e : c.cells_of_dim(1))
      if (c.cells()[e].boundary.count(w) && !arc_set.count(e))
        others.push_back(e);
    require(others.size() == 2,
            "delete_2cell: boundary vertex " + c.cells()[w].name +
                " does not have exactly two outside edges");
    halves_at[w] = {others[0], others[1]};
  }

  // Amalgamation chains: walk paths of outside edges through removed
  // vertices. A closed loop of removed vertices cannot be amalgamated.
  std::set<int> chained;
  for (int w : removed_vertices) {
    if ([&] {
          for (auto& ch : out.edge_chains)
            for (std::size_t i = 1; i < ch.size(); i += 2)
              if (ch[i] == w) return true;
          return false;
        }())
      continue;
    // start a chain from w: extend both directions
    std::vector<int> chain{halves_at[w][0], w, halves_at[w][1]};
    auto extend = [&](bool front) {
      for (;;) {
        int e = front ? chain.front() : chain.back();
        // far endpoint of e along this direction
        int inner = front ? chain[1] : chain[chain.size() - 2];
        int far = -1;
        for (auto& [v, m] : c.cells()[e].boundary)
          if (v != inner) far = v;
        require(far >= 0, "delete_2cell: chain edge is a loop");
        if (!removed_vertices.count(far)) return;
        int next = halves_at[far][0] == e ? halves_at[far][1] : halves_at[far][0];
        if (front) {
          chain.insert(chain.begin(), {next, far});
        } else {
          chain.push_back(far);
          chain.push_back(next);
        }
        if (chain.size() > 2 * c.cells().size())
          throw DomainError("delete_2cell: cyclic amalgamation chain");
      }
    };
    extend(false);
    extend(true);
    out.edge_chains.push_back(chain);
  }

  // Arc merges: each arc joins the two non-deleted 2-cells at it.
  for (int a : cyc.edges) {
    std::vector<int> gs;
    for (int g : c.cells_of_dim(2)) {
      if (g == two_cell) continue;
      auto it = c.cells()[g].boundary.find(a);
      if (it != c.cells()[g].boundary.end())
        for (int k = 0; k < it->second; ++k) gs.push_back(g);
    }
    require(gs.size() == 2, "delete_2cell: arc " + c.cells()[a].name +
                                " has " + std::to_string(gs.size()) +
                                " outside 2-cells");
    require(gs[0] != gs[1],
            "delete_2cell: arc " + c.cells()[a].name +
                " would merge a 2-cell with itself (irregular)");
    out.arc_merges.push_back({a, gs[0], gs[1]});
  }

  // Union-find over 2-cells.
  std::map<int, int> uf;
  std::function<int(int)> find = [&](int x) -> int {
    auto it = uf.find(x);
    if (it == uf.end() || it->second == x) return x;
    return it->second = find(it->second);
  };
  for (auto& [a, g1, g2] : out.arc_merges) {
    uf.emplace(g1, g1);
    uf.emplace(g2, g2);
    uf[find(g1)] = find(g2);
  }

  // Build the output complex.
  std::vector<CellComplex::Cell> ncells;
  std::map<int, int> survivor;   // input id -> output id (representatives)
  std::set<int> removed_edges = arc_set;
  std::map<int, std::pair<int, int>> chain_of_edge;  // half edge -> (chain idx, endpoints)
  for (std::size_t ci = 0; ci < out.edge_chains.size(); ++ci) {
    const auto& ch = out.edge_chains[ci];
    for (std::size_t i = 0; i < ch.size(); i += 2) {
      removed_edges.insert(ch[i]);
      chain_of_edge[ch[i]] = {static_cast<int>(ci), 0};
    }
  }

  // vertices
  for (int v : c.cells_of_dim(0)) {
    if (removed_vertices.count(v)) continue;
    CellComplex::Cell cell;
    cell.dim = 0;
    cell.name = c.cells()[v].name;
    survivor[v] = static_cast<int>(ncells.size());
    ncells.push_back(std::move(cell));
  }
  // surviving edges
  for (int e : c.cells_of_dim(1)) {
    if (removed_edges.count(e)) continue;
    CellComplex::Cell cell;
    cell.dim = 1;
    cell.name = c.cells()[e].name;
    for (auto& [v, m] : c.cells()[e].boundary) cell.boundary[survivor.at(v)] += m;
    survivor[e] = static_cast<int>(ncells.size());
    ncells.push_back(std::move(cell));
  }
  // amalgamated edges, one per chain
  std::vector<int> chain_new_id(out.edge_chains.size(), -1);
  for (std::size_t ci = 0; ci < out.edge_chains.size(); ++ci) {
    const auto& ch = out.edge_chains[ci];
    int e_front = ch.front();
    int e_back = ch.back();
    int inner_front = ch[1];
    int inner_back = ch[ch.size() - 2];
    auto far_of = [&](int e, int inner) {
      int far = -1;
      for (auto& [v, m] : c.cells()[e].boundary)
        if (v != inner) far = v;
      return far;
    };
    int u = far_of(e_front, inner_front);
    int v = far_of(e_back, inner_back);
    require(u != v,
            "delete_2cell: amalgamated edge would be a loop (irregular)");
    CellComplex::Cell cell;
    cell.dim = 1;
    cell.name = c.cells()[e_front].name + "+" + c.cells()[e_back].name;
    cell.boundary[survivor.at(u)] += 1;
    cell.boundary[survivor.at(v)] += 1;
    chain_new_id[ci] = static_cast<int>(ncells.size());
    for (std::size_t i = 0; i < ch.size(); i += 2)
      survivor[ch[i]] = chain_new_id[ci];
    ncells.push_back(std::move(cell));
  }
  // 2-cells: merge classes; boundary = sum - arcs, chains collapsed
  std::map<int, std::vector<int>> class_members;
  for (int g : c.cells_of_dim(2)) {
    if (g == two_cell) continue;
    class_members[find(g)].push_back(g);
  }
  for (auto& [rep, members] : class_members) {
    CellComplex::Cell cell;
    cell.dim = 2;
    std::map<int, int> raw;
    for (int g : members) {
      for (auto& [e, m] : c.cells()[g].boundary) raw[e] += m;
      if (members.size() == 1)
        cell.name = c.cells()[g].name;
    }
    if (cell.name.empty()) {
      std::sort(members.begin(), members.end());
      cell.name = c.cells()[members[0]].name + "*";
    }
    // remove arcs
    for (auto& [a, g1, g2] : out.arc_merges) {
      auto it = raw.find(a);
      if (it == raw.end()) continue;
      require(it->second == 2, "delete_2cell: arc count mismatch in merge");
      raw.erase(it);
    }
    // collapse chains
    for (std::size_t ci = 0; ci < out.edge_chains.size(); ++ci) {
      const auto& ch = out.edge_chains[ci];
      int m0 = -1;
      bool any = false, all_equal = true;
      for (std::size_t i = 0; i < ch.size(); i += 2) {
        auto it = raw.find(ch[i]);
        int m = it == raw.end() ? 0 : it->second;
        if (i == 0)
          m0 = m;
        else if (m != m0)
          all_equal = false;
        if (m > 0) any = true;
      }
      require(all_equal,
              "delete_2cell: inconsistent chain traversal in a merged 2-cell");
      if (!any) continue;
      for (std::size_t i = 0; i < ch.size(); i += 2) raw.erase(ch[i]);
      cell.boundary[chain_new_id[ci]] += m0;
    }
    for (auto& [e, m] : raw) cell.boundary[survivor.at(e)] += m;
    int id = static_cast<int>(ncells.size());
    for (int g : members) survivor[g] = id;
    ncells.push_back(std::move(cell));
  }
  // 3-cells
  std::map<int, std::vector<int>> xclass;  // output: merged pair
  for (int X : c.cells_of_dim(3)) {
    bool merged = X == xs[0] || X == xs[1];
    if (merged && X != xs[0]) continue;  // handle the pair at xs[0]
    CellComplex::Cell cell;
    cell.dim = 3;
    std::map<int, int> raw;
    if (merged) {
      cell.name = c.cells()[xs[0]].name + "+" + c.cells()[xs[1]].name;
      for (int X2 : {xs[0], xs[1]})
        for (auto& [f, m] : c.cells()[X2].boundary) raw[f] += m;
      raw[two_cell] -= 2;
      if (raw[two_cell] == 0) raw.erase(two_cell);
      require(raw.find(two_cell) == raw.end(),
              "delete_2cell: deleted 2-cell count mismatch");
    } else {
      cell.name = c.cells()[X].name;
      for (auto& [f, m] : c.cells()[X].boundary) raw[f] += m;
    }
    // map through merge classes: multiplicity divides by class size
    std::map<int, int> mapped;
    for (auto& [f, m] : raw) mapped[survivor.at(f)] += m;
    for (auto& [nf, m] : mapped) {
      // count members of this class present
      int cls = 1;
      for (auto& [rep, members] : class_members)
        if (survivor.at(members[0]) == nf) cls = static_cast<int>(members.size());
      require(m % cls == 0,
              "delete_2cell: merged 2-cell does not close up around a 3-cell");
      cell.boundary[nf] += m / cls;
    }
    int id = static_cast<int>(ncells.size());
    survivor[X] = id;
    if (merged) survivor[xs[1]] = id;
    ncells.push_back(std::move(cell));
  }

  CellComplex result(std::move(ncells));
  {
    auto rg = check_regular(result);
    require(rg.ok(), "delete_2cell: result is not regular: " +
                         (rg.issues.empty() ? std::string("?") : rg.issues[0]));
    auto sp = check_simple(result);
    require(sp.ok(), "delete_2cell: result is not simple: " +
                         (sp.issues.empty() ? std::string("?") : sp.issues[0]));
  }

  // Euler bookkeeping of the two stages.
  {
    std::ostringstream os;
    int k = out.boundary_vertices;
    os << "raw deletion: 2-cells -1, 3-cells -1 (chi +0); cleanup: vertices -"
       << k << ", arc edges -" << k << ", outside edges "
       << "-" << k << " by amalgamation, 2-cell merges -" << k
       << " (chi +0); total chi change 0";
    out.euler_report = os.str();
  }
  out.survivor_of = std::move(survivor);
  out.complex = std::move(result);
  return out;
}

namespace {

struct PlanEntry {
  // contract the order-complex vertex of cell `from` into the vertex of the
  // class currently containing `into` (alternatives tried in order)
  std::vector<std::pair<int, int>> alternatives;  // (remove cell, keep cell)
};

struct PlanState {
  const CellComplex* c1;
  Triangulation cur;
  std::vector<Move> moves;
  std::map<int, int> uf;  // cell id -> current representative cell id
  long long nodes = 0;
  long long max_nodes;

  int find(int x) {
    auto it = uf.find(x);
    if (it == uf.end() || it->second == x) return x;
    return it->second = find(it->second);
  }
};

bool plan_dfs(PlanState& st, std::vector<PlanEntry>& pending,
              std::vector<char>& done, std::size_t remaining) {
  if (remaining == 0) return true;
  if (++st.nodes > st.max_nodes)
    throw BudgetError(
        "deletion_contraction_sequence: reordering search budget exhausted");
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (done[i]) continue;
    for (auto& [rm, keep] : pending[i].alternatives) {
      int rm_rep = st.find(rm);
      int keep_rep = st.find(keep);
      if (rm_rep == keep_rep) continue;
      const std::string& rm_lab = st.c1->cells()[rm_rep].name;
      const std::string& keep_lab = st.c1->cells()[keep_rep].name;
      auto rv = st.cur.vertex_by_label(rm_lab);
      auto kv = st.cur.vertex_by_label(keep_lab);
      if (!rv || !kv) continue;
      if (!st.cur.has_edge(make_edge(*rv, *kv))) continue;
      if (!is_contractible(st.cur, make_edge(*rv, *kv))) continue;
      // apply
      Triangulation saved = st.cur;
      auto saved_uf = st.uf;
      st.cur = contract(st.cur, keep_lab, rm_lab).result;
      st.uf[rm_rep] = keep_rep;
      st.moves.push_back(Move::contraction(keep_lab, rm_lab));
      done[i] = 1;
      if (plan_dfs(st, pending, done, remaining - 1)) return true;
      done[i] = 0;
      st.moves.pop_back();
      st.uf = std::move(saved_uf);
      st.cur = std::move(saved);
    }
  }
  return false;
}

}  // namespace

DeletionSequence deletion_contraction_sequence(const CellComplex& c,
                                               int two_cell,
                                               long long max_nodes) {
  DeletionSequence out{.moves = {},
                       .before = order_complex(c),
                       .after = boundary_delta4(),  // replaced below
                       .surgery = delete_2cell(c, two_cell)};
  out.after = order_complex(out.surgery.complex);

  const auto& sg = out.surgery;
  std::vector<PlanEntry> pending;
  // delete the 2-cell barycenter into one of the merging 3-cells
  pending.push_back({{{two_cell, sg.merged_3cells[0]},
                      {two_cell, sg.merged_3cells[1]}}});
  // merge the 3-cells
  pending.push_back({{{sg.merged_3cells[1], sg.merged_3cells[0]},
                      {sg.merged_3cells[0], sg.merged_3cells[1]}}});
  // arcs into either neighbouring 2-cell, then merge those 2-cells
  for (auto& [a, g1, g2] : sg.arc_merges) {
    pending.push_back({{{a, g1}, {a, g2}}});
    pending.push_back({{{g2, g1}, {g1, g2}}});
  }
  // chain vertices into either neighbouring edge, then merge edges
  for (auto& ch : sg.edge_chains) {
    for (std::size_t i = 1; i < ch.size(); i += 2) {
      pending.push_back({{{ch[i], ch[i - 1]}, {ch[i], ch[i + 1]}}});
      pending.push_back({{{ch[i + 1], ch[i - 1]}, {ch[i - 1], ch[i + 1]}}});
    }
  }

  PlanState st{.c1 = &c,
               .cur = out.before,
               .moves = {},
               .uf = {},
               .nodes = 0,
               .max_nodes = max_nodes};
  std::vector<char> done(pending.size(), 0);
  bool found = plan_dfs(st, pending, done, pending.size());
  if (!found)
    throw BudgetError(
        "deletion_contraction_sequence: no valid contraction order found "
        "within budget (complex " +
        std::to_string(c.cell_count()) + " cells, 2-cell " +
        c.cells()[two_cell].name + ")");

  check_internal(static_cast<int>(st.moves.size()) ==
                     4 * sg.boundary_vertices + 2,
                 "deletion sequence has wrong length");
  auto iso = isomorphic(st.cur, out.after);
  check_internal(iso.has_value(),
                 "deletion sequence endpoint does not match the reduced "
                 "complex");
  out.moves = std::move(st.moves);
  return out;
}

namespace {

ColoredGraph poset_graph(const CellComplex& c) {
  ColoredGraph g;
  g.n = c.cell_count();
  g.color.resize(g.n);
  g.adj.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    std::uint64_t base = 0x12345;
    int d = c.cells()[i].dim;
    g.color[i] = fnv1a64(&d, sizeof d, base);
    for (auto& [f, m] : c.cells()[i].boundary) {
      std::uint64_t down = fnv1a64("down", 4, static_cast<std::uint64_t>(m));
      std::uint64_t up = fnv1a64("up", 2, static_cast<std::uint64_t>(m));
      g.adj[i].push_back({f, down});
      g.adj[f].push_back({i, up});
    }
  }
  return g;
}

}  // namespace

std::string cell_signature(const CellComplex& c, long long max_nodes) {
  return canonical_graph(poset_graph(c), max_nodes).encoding;
}

std::optional<std::unordered_map<int, int>> cell_isomorphic(
    const CellComplex& a, const CellComplex& b) {
  if (a.cell_count() != b.cell_count() || a.f_vector() != b.f_vector())
    return std::nullopt;
  auto ca = canonical_graph(poset_graph(a));
  auto cb = canonical_graph(poset_graph(b));
  if (ca.encoding != cb.encoding) return std::nullopt;
  std::unordered_map<int, int> map;
  for (int i = 0; i < a.cell_count(); ++i) map[ca.order[i]] = cb.order[i];
  return map;
}

}  // namespace p3
