#include <doctest.h>

#include "p3/homology.hpp"
#include "p3/iso.hpp"
#include "p3/triangulation.hpp"

using namespace p3;

TEST_CASE("boundary of the 4-simplex validates") {
  auto t = boundary_delta4();
  auto r = validate(t);
  CHECK(r.ok());
  CHECK(r.closed);
  CHECK(r.manifold);
  CHECK(r.is_connected);
  CHECK(r.is_orientable);
  CHECK(r.f_vector == std::vector<int>{5, 10, 10, 5});
  CHECK(r.euler == 0);
}

TEST_CASE("a triangle in three tetrahedra is flagged") {
  // three tets sharing the face {0,1,2}
  std::vector<std::string> labels{"0", "1", "2", "3", "4", "5"};
  std::vector<Tet> tops{{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}};
  Triangulation t(3, tops, labels);
  auto r = validate(t);
  CHECK(!r.ok());
  CHECK(!r.closed);
  bool mentions = false;
  for (auto& i : r.issues)
    if (i.check == "closed") mentions = true;
  CHECK(mentions);
}

TEST_CASE("projective plane fixture") {
  auto p = projective_plane_6();
  auto r = validate(p);
  CHECK(r.ok());
  CHECK(r.euler == 1);
  CHECK(!r.is_orientable);
  CHECK(homology(p) == projective_plane_homology());
}

TEST_CASE("homology of the 3-sphere") {
  CHECK(homology(boundary_delta4()) == sphere3_homology());
}

TEST_CASE("homology of the 2-sphere") {
  auto h = homology(boundary_delta3());
  CHECK(h.free_rank == std::vector<int>{1, 0, 1});
  CHECK(h.torsion[1].empty());
}

TEST_CASE("barycentric subdivision: counts, euler, homology") {
  auto t = boundary_delta4();
  auto b = barycentric_subdivision(t);
  CHECK(b.top_count() == 24 * t.top_count());
  CHECK(b.euler_characteristic() == 0);
  CHECK(validate(b).ok());
  CHECK(homology(b) == sphere3_homology());

  auto p = projective_plane_6();
  auto bp = barycentric_subdivision(p);
  CHECK(bp.top_count() == 6 * p.top_count());
  CHECK(homology(bp) == projective_plane_homology());
}

TEST_CASE("iso signature is invariant under relabeling") {
  auto t = boundary_delta4();
  std::unordered_map<VertexId, VertexId> perm{{0, 3}, {1, 0}, {2, 4}, {3, 1}, {4, 2}};
  auto t2 = relabel(t, perm);
  CHECK(iso_signature(t) == iso_signature(t2));
  auto iso = isomorphic(t, t2);
  REQUIRE(iso.has_value());
}

TEST_CASE("non-isomorphic pairs are rejected") {
  auto t = boundary_delta4();
  auto b = barycentric_subdivision(t);
  CHECK(!isomorphic(t, b).has_value());
  CHECK(iso_signature(t) != iso_signature(barycentric_subdivision(boundary_delta3())));
}

TEST_CASE("iso signature separates the two 9-vertex fixtures") {
  // sanity: two different small complexes obtained by different subdivisions
  auto a = barycentric_subdivision(boundary_delta3());
  auto b = boundary_delta3();
  CHECK(iso_signature(a) != iso_signature(b));
}
