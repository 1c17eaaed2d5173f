#pragma once

#include <map>

#include "p3/moves.hpp"
#include "p3/triangulation.hpp"

namespace p3 {

/// Regular CW complex as a graded face poset. Boundaries are multisets of
/// cells one dimension lower (multiplicities beyond 1 mark irregular
/// attachments and are rejected by the regularity check, but the data model
/// keeps them so that diagnostics can show what went wrong). Parallel cells
/// (two edges with the same endpoints) are distinct cells and perfectly
/// legal.
class CellComplex {
 public:
  struct Cell {
    int dim = 0;
    std::map<int, int> boundary;  // face id -> multiplicity
    std::string name;             // stable external id (token)
  };

  CellComplex() = default;
  explicit CellComplex(std::vector<Cell> cells);

  const std::vector<Cell>& cells() const { return cells_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  int dim() const { return dim_; }
  std::vector<int> cells_of_dim(int d) const;
  std::vector<int> f_vector() const;
  long long euler_characteristic() const;

  const std::vector<int>& cofaces(int cell) const;  // cells one dim up
  /// All faces of the closed cell, the cell included.
  std::vector<int> closure(int cell) const;

  std::optional<int> cell_by_name(const std::string& name) const;

  /// Boundary of a 2-cell as the ordered cycle (vertex, edge, vertex, ...).
  /// Requires the cell to be regular in dimension <= 2.
  struct BoundaryCycle {
    std::vector<int> vertices;  // v0, v1, ..., v_{k-1}
    std::vector<int> edges;     // e_i joins v_i and v_{i+1 mod k}
  };
  BoundaryCycle boundary_cycle(int two_cell) const;

 private:
  std::vector<Cell> cells_;
  std::vector<std::vector<int>> cofaces_;
  int dim_ = 0;
};

struct CellCheck {
  bool graded = true;
  bool regular = true;
  bool simple = true;
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Graded-poset sanity: boundaries drop dimension by exactly one, vertices
/// have empty boundary.
CellCheck check_graded(const CellComplex& c);

/// Regularity: the closure of every open k-cell is a closed k-ball, verified
/// combinatorially (edges have two distinct endpoints; 2-cell boundaries are
/// simple cycles with multiplicity one; 3-cell boundaries are embedded
/// 2-spheres by Euler characteristic, connectivity and the two-faces-per-edge
/// count).
CellCheck check_regular(const CellComplex& c);

/// Simplicity: in a 3-complex every vertex meets exactly four edges and every
/// edge exactly three 2-cells counted with multiplicity; in a 2-complex every
/// vertex meets exactly three edges and every edge exactly two 2-cells.
CellCheck check_simple(const CellComplex& c);

/// Dual complex of a closed d-manifold triangulation: k-cells correspond to
/// (d-k)-simplices. Always simple.
CellComplex dual(const Triangulation& t);

/// Order complex of the face poset: one vertex per cell, one top simplex per
/// maximal chain. Realizes the barycentric subdivision of the complex.
Triangulation order_complex(const CellComplex& c);

/// Result of deleting a 2-cell: the two incident 3-cells merge and the
/// boundary vertices/edges of the deleted cell are erased by amalgamation,
/// so a simple regular complex stays simple and regular. The report itemizes
/// the Euler bookkeeping of both stages.
struct Delete2Result {
  CellComplex complex;
  int boundary_vertices = 0;  // k, the vertex count of the deleted cell
  // surgery log (ids in the INPUT complex)
  int cell_deleted = -1;
  std::array<int, 2> merged_3cells{-1, -1};
  std::vector<std::array<int, 3>> arc_merges;      // arc, 2-cell, 2-cell
  std::vector<std::vector<int>> edge_chains;       // e0,w0,e1,w1,...,em (odd len)
  std::map<int, int> survivor_of;                  // input cell -> output cell id
  std::string euler_report;
};

/// Throws DomainError when the deletion would leave an irregular or
/// non-simple complex (e.g. the cell meets the same 3-cell twice).
Delete2Result delete_2cell(const CellComplex& c, int two_cell);

/// Contraction-only move sequence of length exactly 4k+2 transforming the
/// order complex of `c` into (an isomorphic copy of) the order complex of
/// delete_2cell(c, two_cell), where k is the vertex count of the deleted
/// 2-cell. Generated constructively from the surgery plan with a bounded
/// reordering search as fallback; throws BudgetError with diagnostics if the
/// search budget is exhausted.
struct DeletionSequence {
  std::vector<Move> moves;          // contractions on order_complex(c)
  Triangulation before;             // order_complex(c)
  Triangulation after;              // order_complex of the reduced complex
  Delete2Result surgery;
};
DeletionSequence deletion_contraction_sequence(const CellComplex& c,
                                               int two_cell,
                                               long long max_nodes = 200000);

/// Canonical form of the graded poset (names ignored); equal strings iff the
/// complexes are isomorphic as posets.
std::string cell_signature(const CellComplex& c, long long max_nodes = 4000000);

/// Poset isomorphism as a cell-id map, or nullopt.
std::optional<std::unordered_map<int, int>> cell_isomorphic(const CellComplex& a,
                                                            const CellComplex& b);

}  // namespace p3
