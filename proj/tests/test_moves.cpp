#include <doctest.h>

#include <random>

#include "p3/homology.hpp"
#include "p3/iso.hpp"
#include "p3/moves.hpp"

using namespace p3;

TEST_CASE("no edge of the minimal 3-sphere is contractible") {
  auto t = boundary_delta4();
  for (const auto& e : t.edges()) {
    std::string w;
    CHECK(!is_contractible(t, e, &w));
    CHECK(!w.empty());
  }
}

TEST_CASE("expansion then contraction restores the complex exactly") {
  auto t = boundary_delta4();
  auto exps = enumerate_expansions(t, 0);
  CHECK(!exps.empty());
  for (const auto& d : exps) {
    auto r = expand(t, d);
    CHECK(r.result.vertex_count() == t.vertex_count() + 1);
    CHECK(validate(r.result).ok());
    // the created edge is contractible, and contracting restores t
    auto back = apply_move(r.result, r.inverse);
    CHECK(back.result == t);
  }
}

TEST_CASE("enumerate_expansions at a vertex of the minimal 3-sphere") {
  auto t = boundary_delta4();
  // link of a vertex is the boundary of the 3-simplex: K4 has 7 cycles
  // (four 3-cycles, three 4-cycles), two side assignments each.
  auto exps = enumerate_expansions(t, 0);
  CHECK(exps.size() == 14);
}

TEST_CASE("contract removes exactly the star of the edge") {
  auto t = boundary_delta4();
  auto d = enumerate_expansions(t, 0).front();
  auto r = expand(t, d);
  // contract back: the edge {0, new} lies in (equator length) tets
  auto c = contract(r.result, d.vertex, r.new_vertex);
  CHECK(c.removed_tops == r.result.top_count() - t.top_count());
  CHECK(c.result == t);
}

TEST_CASE("contraction round trip via returned inverse is exact") {
  auto t0 = barycentric_subdivision(boundary_delta4());
  int tried = 0;
  for (const auto& e : t0.edges()) {
    if (!is_contractible(t0, e)) continue;
    auto c = contract(t0, t0.label(e[0]), t0.label(e[1]));
    CHECK(validate(c.result).ok());
    auto back = apply_move(c.result, c.inverse);
    CHECK(back.result == t0);
    if (++tried >= 5) break;
  }
  CHECK(tried == 5);
}

TEST_CASE("homology is invariant under contraction") {
  auto t0 = barycentric_subdivision(boundary_delta4());
  auto h0 = homology(t0);
  int tried = 0;
  for (const auto& e : t0.edges()) {
    if (!is_contractible(t0, e)) continue;
    auto c = contract(t0, t0.label(e[0]), t0.label(e[1]));
    CHECK(homology(c.result) == h0);
    if (++tried >= 3) break;
  }
}

TEST_CASE("replay of empty sequence and inverse round trip") {
  auto t = barycentric_subdivision(boundary_delta3());
  CHECK(replay(t, {}) == t);

  // walk: three valid contractions, then replay the inverse
  std::vector<Move> walk;
  Triangulation cur = t;
  for (int k = 0; k < 3; ++k) {
    bool done = false;
    for (const auto& e : cur.edges()) {
      if (!is_contractible(cur, e)) continue;
      walk.push_back(Move::contraction(cur.label(e[0]), cur.label(e[1])));
      cur = contract(cur, cur.label(e[0]), cur.label(e[1])).result;
      done = true;
      break;
    }
    REQUIRE(done);
  }
  auto log = replay_logged(t, walk);
  CHECK(log.endpoint == cur);
  auto back = replay(log.endpoint, log.inverse);
  CHECK(isomorphic(back, t).has_value());
}

TEST_CASE("expansion-only path to the barycentric subdivision") {
  auto t = boundary_delta3();
  auto path = expansion_path_to_subdivision(t);
  // dim 2: one split per face and per edge
  CHECK(static_cast<int>(path.size()) == t.top_count() + static_cast<int>(t.edges().size()));
  auto end = replay(t, path);
  CHECK(isomorphic(end, barycentric_subdivision(t)).has_value());
}

TEST_CASE("expansion-only path realizes the 3d subdivision within 5t splits") {
  auto t = boundary_delta4();
  auto path = expansion_path_to_subdivision(t);
  CHECK(static_cast<int>(path.size()) <= 5 * t.top_count());
  auto end = replay(t, path);
  CHECK(end.top_count() == 24 * t.top_count());
  CHECK(isomorphic(end, barycentric_subdivision(t)).has_value());
}

TEST_CASE("bfs distance: identical and one-move-apart inputs") {
  auto t = boundary_delta4();
  auto d0 = bfs_distance(t, t, 4, 10000);
  CHECK(d0.status == DistanceResult::Status::kFound);
  CHECK(d0.moves.empty());

  auto ex = enumerate_expansions(t, 0).front();
  auto t1 = expand(t, ex).result;
  auto d1 = bfs_distance(t, t1, 4, 100000);
  REQUIRE(d1.status == DistanceResult::Status::kFound);
  CHECK(d1.moves.size() == 1);
  auto end = replay(t, d1.moves);
  CHECK(isomorphic(end, t1).has_value());
}

TEST_CASE("transport of a move list through an isomorphism") {
  auto t = boundary_delta4();
  std::unordered_map<VertexId, VertexId> perm{{0, 4}, {1, 2}, {2, 0}, {3, 1}, {4, 3}};
  auto t2 = relabel(t, perm);
  auto ex = enumerate_expansions(t, 0).front();
  auto r = expand(t, ex);
  std::vector<Move> moves{Move::expansion(ex)};
  auto iso = isomorphic(t, t2);
  REQUIRE(iso.has_value());
  auto tr = transport_replay(t, moves, t2, *iso);
  CHECK(isomorphic(tr.endpoint, r.result).has_value());
}
