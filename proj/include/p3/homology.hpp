#pragma once

#include "p3/triangulation.hpp"

namespace p3 {

/// Integral homology: per dimension a free rank and torsion coefficients
/// forming a divisibility chain (each divides the next).
struct HomologyProfile {
  std::vector<int> free_rank;
  std::vector<std::vector<long long>> torsion;

  bool operator==(const HomologyProfile& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  bool operator!=(const HomologyProfile& o) const { return !(*this == o); }
  std::string to_string() const;
};

/// Sparse integer matrix as column list; computes Smith invariant factors.
struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  // entries[j] = list of (row, value) for column j
  std::vector<std::vector<std::pair<int, long long>>> entries;
};

/// Invariant factors (diagonal of the Smith form, nonzero ones only,
/// normalized positive, divisibility chain).
std::vector<long long> smith_invariants(const SparseIntMatrix& m);

/// Simplicial homology over the integers in all dimensions 0..dim.
HomologyProfile homology(const Triangulation& t);

/// Homology of the 3-sphere / projective 3-space / projective plane, for
/// convenient comparisons in callers and tests.
HomologyProfile sphere3_homology();
HomologyProfile projective3_homology();
HomologyProfile projective_plane_homology();

}  // namespace p3
