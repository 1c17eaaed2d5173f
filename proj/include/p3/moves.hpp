#pragma once

#include "p3/triangulation.hpp"

namespace p3 {

/// Splitting a vertex into an edge. `vertex` keeps the link facets not
/// listed in `side_new`; the created vertex takes the listed ones; the two
/// sides must be complementary discs in the link sphere (arcs in the link
/// circle for dim 2), and their common boundary is the equator.
/// Facets are written as sorted label tuples. An empty `new_vertex` means
/// "assign the smallest unused non-negative integer token".
struct ExpandData {
  std::string vertex;
  std::string new_vertex;
  std::vector<std::vector<std::string>> side_new;
};

/// A single move: either collapse edge {keep, remove} identifying `remove`
/// into `keep`, or the inverse vertex split.
struct Move {
  enum class Kind { kContract, kExpand };
  Kind kind = Kind::kContract;
  std::string keep;
  std::string remove;
  ExpandData expand;

  static Move contraction(std::string keep, std::string remove) {
    Move m;
    m.kind = Kind::kContract;
    m.keep = std::move(keep);
    m.remove = std::move(remove);
    return m;
  }
  static Move expansion(ExpandData d) {
    Move m;
    m.kind = Kind::kExpand;
    m.expand = std::move(d);
    return m;
  }
};

/// Replayable sequence with its endpoint content hash.
struct MoveSequence {
  std::vector<Move> moves;
  std::uint64_t final_hash = 0;
};

/// Link condition: lk(a) and lk(b) intersect exactly in lk(ab), compared as
/// simplicial sets. On failure *witness (if given) receives a description of
/// an offending simplex.
bool is_contractible(const Triangulation& t, const Edge& e,
                     std::string* witness = nullptr);
bool is_contractible(const Triangulation& t, const std::string& a,
                     const std::string& b, std::string* witness = nullptr);

struct ContractResult {
  Triangulation result;
  Move inverse;     // expansion restoring the input exactly (same labels)
  int removed_tops; // number of top simplices containing the edge
};

/// Collapse edge {keep, remove}; the open star of the edge is removed and
/// `remove` is identified into `keep`. Throws DomainError with the witness
/// simplex when the link condition fails.
ContractResult contract(const Triangulation& t, const std::string& keep,
                        const std::string& remove);

struct ExpandResult {
  Triangulation result;
  std::string new_vertex;  // actual label assigned
  Move inverse;            // the contraction undoing the split
};

/// Vertex split. Validates the disc conditions and rejects otherwise.
ExpandResult expand(const Triangulation& t, const ExpandData& d);

/// Apply one move.
struct ApplyResult {
  Triangulation result;
  Move inverse;
};
ApplyResult apply_move(const Triangulation& t, const Move& m);

/// Replay all moves in order; on failure reports the move index.
Triangulation replay(const Triangulation& start, const std::vector<Move>& moves);

/// Replay collecting the inverse sequence (which maps the endpoint back to
/// the start).
struct ReplayLog {
  Triangulation endpoint;
  std::vector<Move> inverse;  // already reversed: ready to replay from endpoint
};
ReplayLog replay_logged(const Triangulation& start,
                        const std::vector<Move>& moves);

/// All legal vertex splits at v: one entry per (equator cycle, side
/// assignment). Deterministic order. Throws BudgetError if the number of
/// equator cycles exceeds max_cycles.
std::vector<ExpandData> enumerate_expansions(const Triangulation& t,
                                             VertexId v,
                                             int max_cycles = 100000);

/// All moves available from t (contractions with keep = smaller label,
/// expansions in one orientation per equator). Used by the move-graph search.
std::vector<Move> available_moves(const Triangulation& t, int max_cycles_per_vertex = 100000);

/// Expansion-only path from t to (an isomorphic copy of) its barycentric
/// subdivision: star splits at all tops, then all original (dim-1)-faces,
/// then all original edges. Length = sum of face counts in dims 1..dim.
std::vector<Move> expansion_path_to_subdivision(const Triangulation& t);

/// Transport a move list through an isomorphism and replay it on `start`.
/// `vertex_map` sends present vertex ids of `from` to present ids of `start`.
struct TransportResult {
  std::vector<Move> moves;
  Triangulation endpoint;
};
TransportResult transport_replay(const Triangulation& from,
                                 const std::vector<Move>& moves,
                                 const Triangulation& start,
                                 const std::unordered_map<VertexId, VertexId>& vertex_map);

struct DistanceResult {
  enum class Status { kFound, kNoPathWithinDepth, kBudgetExhausted };
  Status status = Status::kBudgetExhausted;
  std::vector<Move> moves;  // valid from the first triangulation
  long long explored = 0;
};

/// Bidirectional breadth-first search over the move graph with canonical-form
/// deduplication. Finds a shortest sequence within the budgets, reports
/// exhaustion as its own outcome (distinct from a proved absence).
DistanceResult bfs_distance(const Triangulation& t1, const Triangulation& t2,
                            int max_depth, long long max_states);

}  // namespace p3
