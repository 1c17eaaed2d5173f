#include <doctest.h>

#include "p3/cellcomplex.hpp"
#include "p3/homology.hpp"
#include "p3/iso.hpp"

using namespace p3;

TEST_CASE("dual of the minimal 3-sphere") {
  auto t = boundary_delta4();
  auto c = dual(t);
  CHECK(c.f_vector() == std::vector<int>{5, 10, 10, 5});
  CHECK(c.euler_characteristic() == 0);
  CHECK(check_simple(c).ok());
  CHECK(check_regular(c).ok());
}

TEST_CASE("order complex of the dual is the barycentric subdivision") {
  auto t = boundary_delta4();
  auto oc = order_complex(dual(t));
  CHECK(oc.top_count() == 120);
  CHECK(validate(oc).ok());
  CHECK(isomorphic(oc, barycentric_subdivision(t)).has_value());
}

TEST_CASE("order complex of a solid tetrahedron is a ball") {
  // closed 3-simplex as a cell complex
  std::vector<CellComplex::Cell> cells;
  for (int v = 0; v < 4; ++v) cells.push_back({0, {}, "v" + std::to_string(v)});
  int e_id = 4;
  std::map<std::pair<int, int>, int> eid;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      cells.push_back({1, {{a, 1}, {b, 1}}, "e" + std::to_string(a) + std::to_string(b)});
      eid[{a, b}] = e_id++;
    }
  int f_id = e_id;
  std::vector<int> fids;
  for (int skip = 0; skip < 4; ++skip) {
    std::map<int, int> bnd;
    std::vector<int> vs;
    for (int v = 0; v < 4; ++v)
      if (v != skip) vs.push_back(v);
    bnd[eid[{vs[0], vs[1]}]] = 1;
    bnd[eid[{vs[0], vs[2]}]] = 1;
    bnd[eid[{vs[1], vs[2]}]] = 1;
    cells.push_back({2, bnd, "f" + std::to_string(skip)});
    fids.push_back(f_id++);
  }
  std::map<int, int> ball_bnd;
  for (int f : fids) ball_bnd[f] = 1;
  cells.push_back({3, ball_bnd, "B"});
  CellComplex c(std::move(cells));
  CHECK(check_regular(c).ok());
  auto oc = order_complex(c);
  CHECK(oc.euler_characteristic() == 1);
  CHECK(oc.top_count() == 24);
}

TEST_CASE("cell signature is label-independent") {
  auto c = dual(boundary_delta4());
  // same complex with shuffled cell order
  std::vector<CellComplex::Cell> cells = c.cells();
  int n = static_cast<int>(cells.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;
  std::vector<CellComplex::Cell> shuffled(n);
  for (int i = 0; i < n; ++i) {
    CellComplex::Cell cc = cells[i];
    std::map<int, int> bnd;
    for (auto& [f, m] : cc.boundary) bnd[perm[f]] = m;
    cc.boundary = bnd;
    shuffled[perm[i]] = cc;
  }
  CellComplex c2(std::move(shuffled));
  CHECK(cell_signature(c) == cell_signature(c2));
  CHECK(cell_isomorphic(c, c2).has_value());
}

TEST_CASE("deleting a 2-cell from the dual of the minimal 3-sphere") {
  auto c = dual(boundary_delta4());
  int two = c.cells_of_dim(2).front();
  auto r = delete_2cell(c, two);
  CHECK(r.boundary_vertices == 3);
  CHECK(r.complex.cells_of_dim(3).size() == 4);
  CHECK(r.complex.euler_characteristic() == 0);
  CHECK(check_simple(r.complex).ok());
  CHECK(check_regular(r.complex).ok());
  CHECK(!r.euler_report.empty());
}

TEST_CASE("contraction sequence for a triangular 2-cell has length 14") {
  auto c = dual(boundary_delta4());
  int two = c.cells_of_dim(2).front();
  auto seq = deletion_contraction_sequence(c, two);
  CHECK(seq.moves.size() == 14);
  for (const auto& m : seq.moves) CHECK(m.kind == Move::Kind::kContract);
  auto end = replay(seq.before, seq.moves);
  CHECK(isomorphic(end, seq.after).has_value());
}
