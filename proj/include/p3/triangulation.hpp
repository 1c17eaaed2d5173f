#pragma once

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "p3/base.hpp"

namespace p3 {

using Edge = std::array<VertexId, 2>;  // sorted ascending
using Tri = std::array<VertexId, 3>;   // sorted ascending
using Tet = std::array<VertexId, 4>;   // sorted ascending; [3]==kNoVertex in dim 2

Edge make_edge(VertexId a, VertexId b);
Tri make_tri(VertexId a, VertexId b, VertexId c);
Tet make_tet(VertexId a, VertexId b, VertexId c, VertexId d);

/// Closed triangulated 2- or 3-manifold as an abstract simplicial complex.
/// Simplices are vertex sets; top simplices are stored sorted and deduplicated.
/// Vertices carry opaque string labels for I/O; all internal work uses ids.
/// Immutable after construction: move operations return new objects.
class Triangulation {
 public:
  /// tops: vertex-id tuples (dim+1 entries used). Labels indexed by id;
  /// ids not appearing in tops are tolerated in the label table.
  Triangulation(int dim, std::vector<Tet> tops, std::vector<std::string> labels);

  int dim() const { return dim_; }
  const std::vector<Tet>& tops() const { return tops_; }
  int top_count() const { return static_cast<int>(tops_.size()); }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  bool has_vertex(VertexId v) const;

  const std::vector<std::string>& label_table() const { return labels_; }
  const std::string& label(VertexId v) const;
  std::optional<VertexId> vertex_by_label(const std::string& s) const;
  /// Smallest non-negative integer (as decimal token) not currently a label.
  std::string fresh_label() const;

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Tri>& triangles() const { return triangles_; }  // dim 3 only
  std::vector<int> f_vector() const;  // (f0,...,f_dim)
  long long euler_characteristic() const;

  bool has_top(const Tet& t) const;
  bool has_triangle(const Tri& t) const;
  bool has_edge(const Edge& e) const;

  /// Indices into tops() of tops containing the given simplex.
  const std::vector<int>& tops_at(VertexId v) const;
  std::vector<int> tops_at(const Edge& e) const;
  std::vector<int> tops_at(const Tri& t) const;  // dim 3 only
  int edge_degree(const Edge& e) const;          // number of tops containing e

  /// Link facets of a vertex: opposite (dim-1)-faces of the tops at v,
  /// sorted lexicographically (this fixes the documented link ordering
  /// used by the moves file format). Entries use Tri storage; in dim 2 the
  /// third slot is kNoVertex.
  std::vector<Tri> link_facets(VertexId v) const;
  /// Vertices adjacent to v.
  std::vector<VertexId> link_vertices(VertexId v) const;
  /// Edges {x,y} with {v,x,y} a simplex.
  std::vector<Edge> link_edges(VertexId v) const;

  bool connected() const;
  bool orientable() const;

  /// Deterministic content hash of labels + top simplices (not iso-invariant).
  std::uint64_t content_hash() const;

  bool operator==(const Triangulation& o) const {
    return dim_ == o.dim_ && tops_ == o.tops_;
  }

 private:
  int dim_;
  std::vector<Tet> tops_;             // sorted
  std::vector<std::string> labels_;   // id -> label
  std::vector<VertexId> vertices_;    // sorted, present only
  std::vector<Edge> edges_;           // sorted
  std::vector<Tri> triangles_;        // sorted (dim 3)
  std::unordered_map<std::string, VertexId> by_label_;
  std::unordered_map<VertexId, std::vector<int>> star_;
  std::unordered_map<Edge, std::vector<int>, ArrayHash> edge_star_;
  std::unordered_map<Tri, std::vector<int>, ArrayHash> tri_star_;
};

struct ValidationIssue {
  std::string check;
  std::string detail;
};

struct ValidationReport {
  bool closed = false;        // every facet in exactly two tops
  bool manifold = false;      // vertex links are spheres / circles
  bool is_connected = false;
  bool is_orientable = false;
  std::vector<int> f_vector;
  long long euler = 0;
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

/// Structural validation: closedness, the manifold condition (vertex links
/// are 2-spheres via Euler characteristic + connectivity + each link edge in
/// exactly two link triangles; circles in dim 2), connectivity, orientability.
ValidationReport validate(const Triangulation& t);

/// Convenience: throws DomainError with the report summary unless ok().
void require_valid(const Triangulation& t, const std::string& what);

/// Vertices of the output are the simplices of the input; tops are maximal
/// flags. Multiplies the top count by (dim+1)!, preserves Euler
/// characteristic and homology.
Triangulation barycentric_subdivision(const Triangulation& t);

/// Boundary of the 4-simplex: the 5-vertex 3-sphere.
Triangulation boundary_delta4();
/// Boundary of the 3-simplex: the 4-vertex 2-sphere.
Triangulation boundary_delta3();
/// The 6-vertex projective plane (icosahedron modulo the antipodal map).
Triangulation projective_plane_6();

/// Relabel through a vertex bijection (ids permuted; labels follow).
Triangulation relabel(const Triangulation& t,
                      const std::unordered_map<VertexId, VertexId>& perm);

}  // namespace p3
