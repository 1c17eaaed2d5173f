#include "p3/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace p3 {

Edge make_edge(VertexId a, VertexId b) {
  check_internal(a != b, "edge with repeated vertex");
  if (a > b) std::swap(a, b);
  return {a, b};
}

Tri make_tri(VertexId a, VertexId b, VertexId c) {
  Tri t{a, b, c};
  std::sort(t.begin(), t.end());
  check_internal(t[0] != t[1] && t[1] != t[2], "triangle with repeated vertex");
  return t;
}

Tet make_tet(VertexId a, VertexId b, VertexId c, VertexId d) {
  Tet t{a, b, c, d};
  std::sort(t.begin(), t.end());
  for (int i = 0; i + 1 < 4; ++i)
    check_internal(t[i] != t[i + 1], "tetrahedron with repeated vertex");
  return t;
}

Triangulation::Triangulation(int dim, std::vector<Tet> tops,
                             std::vector<std::string> labels)
    : dim_(dim), tops_(std::move(tops)), labels_(std::move(labels)) {
  require(dim_ == 2 || dim_ == 3, "triangulation dimension must be 2 or 3");
  for (auto& t : tops_) {
    int used = dim_ + 1;
    std::sort(t.begin(), t.begin() + used);
    if (dim_ == 2) t[3] = kNoVertex;
    for (int i = 0; i + 1 < used; ++i)
      require(t[i] != t[i + 1], "top simplex with repeated vertex");
    for (int i = 0; i < used; ++i)
      require(t[i] >= 0 && t[i] < static_cast<VertexId>(labels_.size()),
              "vertex id outside label table");
  }
  std::sort(tops_.begin(), tops_.end());
  require(std::adjacent_find(tops_.begin(), tops_.end()) == tops_.end(),
          "repeated top simplex");

  std::set<VertexId> vs;
  for (int i = 0; i < static_cast<int>(tops_.size()); ++i) {
    const Tet& t = tops_[i];
    for (int a = 0; a <= dim_; ++a) {
      vs.insert(t[a]);
      star_[t[a]].push_back(i);
      for (int b = a + 1; b <= dim_; ++b) {
        edge_star_[make_edge(t[a], t[b])].push_back(i);
        if (dim_ == 3) {
          for (int c = b + 1; c <= dim_; ++c)
            tri_star_[make_tri(t[a], t[b], t[c])].push_back(i);
        }
      }
    }
  }
  vertices_.assign(vs.begin(), vs.end());
  edges_.reserve(edge_star_.size());
  for (auto& [e, _] : edge_star_) edges_.push_back(e);
  std::sort(edges_.begin(), edges_.end());
  if (dim_ == 3) {
    triangles_.reserve(tri_star_.size());
    for (auto& [f, _] : tri_star_) triangles_.push_back(f);
    std::sort(triangles_.begin(), triangles_.end());
  } else {
    // In dim 2 the tops themselves are the triangles.
    for (const auto& t : tops_) triangles_.push_back({t[0], t[1], t[2]});
  }
  for (VertexId v : vertices_) {
    require(!labels_[v].empty(), "present vertex with empty label");
    auto [it, fresh] = by_label_.emplace(labels_[v], v);
    require(fresh, "duplicate vertex label: " + labels_[v]);
  }
}

bool Triangulation::has_vertex(VertexId v) const {
  return star_.count(v) > 0;
}

const std::string& Triangulation::label(VertexId v) const {
  check_internal(v >= 0 && v < static_cast<VertexId>(labels_.size()),
                 "label(): bad id");
  return labels_[v];
}

std::optional<VertexId> Triangulation::vertex_by_label(
    const std::string& s) const {
  auto it = by_label_.find(s);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::string Triangulation::fresh_label() const {
  for (long long k = 0;; ++k) {
    std::string c = std::to_string(k);
    if (!by_label_.count(c)) return c;
  }
}

std::vector<int> Triangulation::f_vector() const {
  std::vector<int> f(dim_ + 1, 0);
  f[0] = vertex_count();
  f[1] = static_cast<int>(edges_.size());
  if (dim_ == 2) {
    f[2] = top_count();
  } else {
    f[2] = static_cast<int>(triangles_.size());
    f[3] = top_count();
  }
  return f;
}

long long Triangulation::euler_characteristic() const {
  auto f = f_vector();
  long long chi = 0;
  for (int i = 0; i <= dim_; ++i) chi += (i % 2 ? -1 : 1) * f[i];
  return chi;
}

bool Triangulation::has_top(const Tet& t) const {
  return std::binary_search(tops_.begin(), tops_.end(), t);
}

bool Triangulation::has_triangle(const Tri& t) const {
  if (dim_ == 2) return has_top({t[0], t[1], t[2], kNoVertex});
  return tri_star_.count(t) > 0;
}

bool Triangulation::has_edge(const Edge& e) const {
  return edge_star_.count(e) > 0;
}

const std::vector<int>& Triangulation::tops_at(VertexId v) const {
  static const std::vector<int> empty;
  auto it = star_.find(v);
  return it == star_.end() ? empty : it->second;
}

std::vector<int> Triangulation::tops_at(const Edge& e) const {
  auto it = edge_star_.find(e);
  return it == edge_star_.end() ? std::vector<int>{} : it->second;
}

std::vector<int> Triangulation::tops_at(const Tri& t) const {
  check_internal(dim_ == 3, "tops_at(triangle) needs dim 3");
  auto it = tri_star_.find(t);
  return it == tri_star_.end() ? std::vector<int>{} : it->second;
}

int Triangulation::edge_degree(const Edge& e) const {
  auto it = edge_star_.find(e);
  return it == edge_star_.end() ? 0 : static_cast<int>(it->second.size());
}

std::vector<Tri> Triangulation::link_facets(VertexId v) const {
  std::vector<Tri> out;
  for (int i : tops_at(v)) {
    const Tet& t = tops_[i];
    Tri f{kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (int a = 0; a <= dim_; ++a)
      if (t[a] != v) f[k++] = t[a];
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> Triangulation::link_vertices(VertexId v) const {
  std::set<VertexId> s;
  for (int i : tops_at(v))
    for (int a = 0; a <= dim_; ++a)
      if (tops_[i][a] != v) s.insert(tops_[i][a]);
  return {s.begin(), s.end()};
}

std::vector<Edge> Triangulation::link_edges(VertexId v) const {
  std::set<Edge> s;
  for (int i : tops_at(v)) {
    const Tet& t = tops_[i];
    for (int a = 0; a <= dim_; ++a)
      for (int b = a + 1; b <= dim_; ++b)
        if (t[a] != v && t[b] != v) s.insert(make_edge(t[a], t[b]));
  }
  return {s.begin(), s.end()};
}

bool Triangulation::connected() const {
  if (tops_.empty()) return false;
  std::vector<int> comp(tops_.size(), -1);
  std::vector<int> stack{0};
  comp[0] = 0;
  // Tops adjacent when they share a facet.
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    const Tet& t = tops_[i];
    for (int a = 0; a <= dim_; ++a) {
      std::vector<int> nb;
      if (dim_ == 3) {
        Tri f{kNoVertex, kNoVertex, kNoVertex};
        int k = 0;
        for (int b = 0; b <= dim_; ++b)
          if (b != a) f[k++] = t[b];
        nb = tops_at(make_tri(f[0], f[1], f[2]));
      } else {
        Edge e = make_edge(t[(a + 1) % 3], t[(a + 2) % 3]);
        nb = tops_at(e);
      }
      for (int j : nb)
        if (comp[j] < 0) {
          comp[j] = 0;
          stack.push_back(j);
        }
    }
  }
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

bool Triangulation::orientable() const {
  // Propagate orientations across shared facets; consistent iff orientable.
  // The orientation of a sorted simplex is +-1; two tops induce opposite
  // orientations on a shared facet exactly when the parity rule below holds.
  std::vector<int> sign(tops_.size(), 0);
  for (std::size_t root = 0; root < tops_.size(); ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::vector<int> stack{static_cast<int>(root)};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      const Tet& t = tops_[i];
      for (int a = 0; a <= dim_; ++a) {
        std::vector<int> nb;
        if (dim_ == 3) {
          Tri f{kNoVertex, kNoVertex, kNoVertex};
          int k = 0;
          for (int b = 0; b <= dim_; ++b)
            if (b != a) f[k++] = t[b];
          nb = tops_at(make_tri(f[0], f[1], f[2]));
        } else {
          nb = tops_at(make_edge(t[(a + 1) % 3], t[(a + 2) % 3]));
        }
        for (int j : nb) {
          if (j == i) continue;
          // Position of the missing vertex in each top determines the induced
          // facet orientation: tops agree on the facet orientation iff the
          // parities of the omitted positions differ.
          const Tet& u = tops_[j];
          int pos_j = 0;
          for (int b = 0; b <= dim_; ++b) {
            bool shared = false;
            for (int c = 0; c <= dim_; ++c)
              if (c != a && t[c] == u[b]) shared = true;
            if (!shared) pos_j = b;
          }
          int want = ((a + pos_j) % 2 == 0) ? -sign[i] : sign[i];
          if (sign[j] == 0) {
            sign[j] = want;
            stack.push_back(j);
          } else if (sign[j] != want) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

std::uint64_t Triangulation::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a64(&dim_, sizeof dim_, h);
  for (const auto& t : tops_) {
    for (int a = 0; a <= dim_; ++a) {
      const std::string& s = labels_[t[a]];
      h = fnv1a64(s.data(), s.size(), h);
      h = fnv1a64("|", 1, h);
    }
    h = fnv1a64(";", 1, h);
  }
  return h;
}

namespace {

// Checks that the given 2-complex (edges as (dim-1)-facets of link data)
// forms a closed surface that is connected with chi == want_chi.
struct LinkCheck {
  bool closed = true;
  bool is_connected = true;
  long long chi = 0;
};

LinkCheck check_link_surface(const std::vector<Tri>& facets) {
  // facets: triangles of a 2-complex (vertex-link in a 3-complex).
  LinkCheck r;
  std::set<VertexId> vs;
  std::map<Edge, int> edge_count;
  for (const auto& f : facets) {
    for (int a = 0; a < 3; ++a) vs.insert(f[a]);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        edge_count[make_edge(f[a], f[b])]++;
  }
  for (auto& [e, c] : edge_count)
    if (c != 2) r.closed = false;
  r.chi = static_cast<long long>(vs.size()) -
          static_cast<long long>(edge_count.size()) +
          static_cast<long long>(facets.size());
  // connectivity over facet adjacency
  if (!facets.empty()) {
    std::map<Edge, std::vector<int>> by_edge;
    for (int i = 0; i < static_cast<int>(facets.size()); ++i)
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          by_edge[make_edge(facets[i][a], facets[i][b])].push_back(i);
    std::vector<char> seen(facets.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          for (int j : by_edge[make_edge(facets[i][a], facets[i][b])])
            if (!seen[j]) {
              seen[j] = 1;
              stack.push_back(j);
            }
    }
    for (char c : seen)
      if (!c) r.is_connected = false;
  }
  return r;
}

// Link of a vertex in a 2-complex must be a single cycle.
bool link_is_circle(const std::vector<Edge>& link_edges) {
  if (link_edges.empty()) return false;
  std::map<VertexId, int> deg;
  for (const auto& e : link_edges) {
    deg[e[0]]++;
    deg[e[1]]++;
  }
  for (auto& [v, d] : deg)
    if (d != 2) return false;
  // connected?
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const auto& e : link_edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::set<VertexId> seen;
  std::vector<VertexId> stack{link_edges[0][0]};
  seen.insert(stack[0]);
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[v])
      if (!seen.count(w)) {
        seen.insert(w);
        stack.push_back(w);
      }
  }
  return seen.size() == deg.size();
}

}  // namespace

ValidationReport validate(const Triangulation& t) {
  ValidationReport r;
  r.f_vector = t.f_vector();
  r.euler = t.euler_characteristic();

  if (t.top_count() == 0) {
    r.issues.push_back({"nonempty", "no top simplices"});
    return r;
  }

  // Closedness: every (dim-1)-face in exactly two tops.
  r.closed = true;
  if (t.dim() == 3) {
    for (const auto& f : t.triangles()) {
      int d = static_cast<int>(t.tops_at(f).size());
      if (d != 2) {
        r.closed = false;
        r.issues.push_back(
            {"closed", "triangle {" + t.label(f[0]) + "," + t.label(f[1]) +
                           "," + t.label(f[2]) + "} lies in " +
                           std::to_string(d) + " tetrahedra"});
      }
    }
  } else {
    for (const auto& e : t.edges()) {
      int d = t.edge_degree(e);
      if (d != 2) {
        r.closed = false;
        r.issues.push_back({"closed", "edge {" + t.label(e[0]) + "," +
                                          t.label(e[1]) + "} lies in " +
                                          std::to_string(d) + " faces"});
      }
    }
  }

  // Manifold condition via vertex links.
  r.manifold = true;
  if (r.closed) {
    for (VertexId v : t.vertices()) {
      if (t.dim() == 3) {
        auto lk = check_link_surface(t.link_facets(v));
        if (!lk.closed || !lk.is_connected || lk.chi != 2) {
          r.manifold = false;
          r.issues.push_back(
              {"manifold", "link of vertex " + t.label(v) +
                               " is not a 2-sphere (closed=" +
                               std::to_string(lk.closed) + " connected=" +
                               std::to_string(lk.is_connected) +
                               " chi=" + std::to_string(lk.chi) + ")"});
        }
      } else {
        if (!link_is_circle(t.link_edges(v))) {
          r.manifold = false;
          r.issues.push_back({"manifold", "link of vertex " + t.label(v) +
                                              " is not a circle"});
        }
      }
    }
  } else {
    r.manifold = false;
  }

  r.is_connected = t.connected();
  if (!r.is_connected) r.issues.push_back({"connected", "complex is not connected"});
  r.is_orientable = t.orientable();

  if (t.dim() == 3 && r.closed && r.manifold && r.euler != 0) {
    r.issues.push_back({"euler", "closed 3-manifold must have chi 0, got " +
                                     std::to_string(r.euler)});
  }
  return r;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "closed=" << closed << " manifold=" << manifold
     << " connected=" << is_connected << " orientable=" << is_orientable
     << " chi=" << euler << " f=(";
  for (std::size_t i = 0; i < f_vector.size(); ++i)
    os << (i ? "," : "") << f_vector[i];
  os << ")";
  for (const auto& i : issues) os << "\n  [" << i.check << "] " << i.detail;
  return os.str();
}

void require_valid(const Triangulation& t, const std::string& what) {
  auto r = validate(t);
  if (!r.ok())
    throw DomainError(what + ": invalid triangulation\n" + r.summary());
}

Triangulation barycentric_subdivision(const Triangulation& t) {
  // New vertices: one per simplex of every dimension, labeled
  // b(<sorted labels joined by .>). Tops: maximal flags.
  std::vector<std::string> labels;
  std::map<std::vector<VertexId>, VertexId> id_of;
  auto get = [&](std::vector<VertexId> s) -> VertexId {
    std::sort(s.begin(), s.end());
    auto it = id_of.find(s);
    if (it != id_of.end()) return it->second;
    std::string lab = "b(";
    for (std::size_t i = 0; i < s.size(); ++i)
      lab += (i ? "." : "") + t.label(s[i]);
    lab += ")";
    VertexId v = static_cast<VertexId>(labels.size());
    labels.push_back(lab);
    id_of.emplace(std::move(s), v);
    return v;
  };

  std::vector<Tet> tops;
  std::vector<int> perm(t.dim() + 1);
  std::iota(perm.begin(), perm.end(), 0);
  for (const auto& top : t.tops()) {
    std::vector<int> p = perm;
    do {
      // chain: {v_p0} < {v_p0,v_p1} < ...
      Tet nt{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
      std::vector<VertexId> chain;
      for (int i = 0; i <= t.dim(); ++i) {
        chain.push_back(top[p[i]]);
        nt[i] = get(chain);
      }
      std::sort(nt.begin(), nt.begin() + t.dim() + 1);
      tops.push_back(nt);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return Triangulation(t.dim(), std::move(tops), std::move(labels));
}

Triangulation boundary_delta4() {
  std::vector<std::string> labels{"0", "1", "2", "3", "4"};
  std::vector<Tet> tops;
  for (VertexId skip = 0; skip < 5; ++skip) {
    Tet t{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (VertexId v = 0; v < 5; ++v)
      if (v != skip) t[k++] = v;
    tops.push_back(t);
  }
  return Triangulation(3, std::move(tops), std::move(labels));
}

Triangulation boundary_delta3() {
  std::vector<std::string> labels{"0", "1", "2", "3"};
  std::vector<Tet> tops;
  for (VertexId skip = 0; skip < 4; ++skip) {
    Tet t{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    int k = 0;
    for (VertexId v = 0; v < 4; ++v)
      if (v != skip) t[k++] = v;
    tops.push_back(t);
  }
  return Triangulation(2, std::move(tops), std::move(labels));
}

Triangulation projective_plane_6() {
  // Antipodal quotient of the icosahedron.
  std::vector<std::string> labels{"0", "1", "2", "3", "4", "5"};
  const int faces[10][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5},
                            {0, 1, 5}, {1, 2, 4}, {2, 4, 5}, {2, 3, 5},
                            {1, 3, 5}, {1, 3, 4}};
  std::vector<Tet> tops;
  for (auto& f : faces)
    tops.push_back({f[0], f[1], f[2], kNoVertex});
  return Triangulation(2, std::move(tops), std::move(labels));
}

Triangulation relabel(const Triangulation& t,
                      const std::unordered_map<VertexId, VertexId>& perm) {
  VertexId max_id = 0;
  for (auto& [a, b] : perm) max_id = std::max(max_id, b);
  std::vector<std::string> labels(max_id + 1);
  for (VertexId v : t.vertices()) {
    auto it = perm.find(v);
    check_internal(it != perm.end(), "relabel: missing vertex in permutation");
    labels[it->second] = t.label(v);
  }
  // Fill unused slots with unique placeholders to keep the table well-formed.
  std::vector<Tet> tops;
  for (const auto& top : t.tops()) {
    Tet nt{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    for (int i = 0; i <= t.dim(); ++i) nt[i] = perm.at(top[i]);
    std::sort(nt.begin(), nt.begin() + t.dim() + 1);
    tops.push_back(nt);
  }
  return Triangulation(t.dim(), std::move(tops), std::move(labels));
}

}  // namespace p3
