#include "p3/homology.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <numeric>
#include <sstream>

namespace p3 {

using boost::multiprecision::cpp_int;

std::string HomologyProfile::to_string() const {
  std::ostringstream os;
  for (std::size_t d = 0; d < free_rank.size(); ++d) {
    if (d) os << " ";
    os << "H" << d << "=Z^" << free_rank[d];
    for (long long q : torsion[d]) os << "+Z/" << q;
  }
  return os.str();
}

namespace {

// Sparse Smith reduction. Unit pivots are eliminated with pure row
// operations (the pivot row is cleared for free afterwards since the pivot
// column is a unit vector). The residual without unit entries is reduced
// densely with exact big integers.
class SmithReducer {
 public:
  explicit SmithReducer(const SparseIntMatrix& m) {
    for (int j = 0; j < m.cols; ++j)
      for (auto& [r, v] : m.entries[j])
        if (v != 0) set(r, j, v);
    for (auto& [r, row] : rows_) by_size_.insert({row.size(), r});
  }

  std::vector<long long> run() {
    std::vector<cpp_int> diag;
    // Phase 1: unit pivots, preferring short rows and thin columns to limit
    // fill-in. Rows without unit entries are skipped and retried later.
    std::set<int> skipped;
    for (;;) {
      int pr = -1, pc = -1;
      for (auto& [sz, r] : by_size_) {
        if (skipped.count(r)) continue;
        std::size_t best_col = 0;
        for (auto& [c, v] : rows_[r]) {
          if (v == 1 || v == -1) {
            std::size_t cs = col_support_[c].size();
            if (pc < 0 || cs < best_col) {
              best_col = cs;
              pc = c;
            }
          }
        }
        if (pc >= 0) {
          pr = r;
          break;
        }
        skipped.insert(r);
      }
      if (pr < 0) break;
      eliminate_unit(pr, pc, &skipped);
      diag.push_back(1);
    }
    // Phase 2: dense reduction of whatever is left.
    if (!rows_.empty()) {
      std::map<int, int> rmap, cmap;
      for (auto& [r, row] : rows_) {
        if (!rmap.count(r)) rmap[r] = static_cast<int>(rmap.size());
        for (auto& [c, v] : row)
          if (!cmap.count(c)) cmap[c] = static_cast<int>(cmap.size());
      }
      int R = static_cast<int>(rmap.size());
      int C = static_cast<int>(cmap.size());
      std::vector<std::vector<cpp_int>> a(R, std::vector<cpp_int>(C, 0));
      for (auto& [r, row] : rows_)
        for (auto& [c, v] : row) a[rmap[r]][cmap[c]] = v;
      dense_smith(a, diag);
    }
    // Normalize to a divisibility chain and export.
    std::vector<cpp_int> nz;
    for (auto& d : diag)
      if (d != 0) nz.push_back(abs(d));
    for (std::size_t i = 0; i < nz.size(); ++i)
      for (std::size_t j = i + 1; j < nz.size(); ++j) {
        cpp_int g = gcd(nz[i], nz[j]);
        cpp_int l = nz[i] / g * nz[j];
        nz[i] = g;
        nz[j] = l;
      }
    std::vector<long long> out;
    for (auto& d : nz) {
      check_internal(d <= cpp_int(std::numeric_limits<long long>::max()),
                     "smith invariant exceeds 64 bits");
      out.push_back(static_cast<long long>(d));
    }
    return out;
  }

 private:
  void set(int r, int c, cpp_int v) {
    rows_[r][c] = std::move(v);
    col_support_[c].insert(r);
  }
  void erase(int r, int c) {
    auto it = rows_.find(r);
    if (it != rows_.end()) {
      it->second.erase(c);
      if (it->second.empty()) rows_.erase(it);
    }
    auto jt = col_support_.find(c);
    if (jt != col_support_.end()) {
      jt->second.erase(r);
      if (jt->second.empty()) col_support_.erase(jt);
    }
  }

  void eliminate_unit(int pr, int pc, std::set<int>* skipped) {
    cpp_int pv = rows_[pr][pc];
    std::vector<int> col_rows(col_support_[pc].begin(),
                              col_support_[pc].end());
    std::vector<std::pair<int, cpp_int>> prow(rows_[pr].begin(),
                                              rows_[pr].end());
    for (int r : col_rows) {
      if (r == pr) continue;
      by_size_.erase({rows_[r].size(), r});
      skipped->erase(r);
      cpp_int f = rows_[r][pc] / pv;  // pv is +-1
      for (auto& [c, v] : prow) {
        cpp_int nv = get(r, c) - f * v;
        if (nv == 0)
          erase(r, c);
        else
          set(r, c, std::move(nv));
      }
      auto it = rows_.find(r);
      if (it != rows_.end()) by_size_.insert({it->second.size(), r});
    }
    by_size_.erase({prow.size(), pr});
    for (auto& [c, v] : prow) erase(pr, c);
  }

  cpp_int get(int r, int c) const {
    auto it = rows_.find(r);
    if (it == rows_.end()) return 0;
    auto jt = it->second.find(c);
    return jt == it->second.end() ? cpp_int(0) : jt->second;
  }

  static void dense_smith(std::vector<std::vector<cpp_int>>& a,
                          std::vector<cpp_int>& diag) {
    int R = static_cast<int>(a.size());
    int C = R ? static_cast<int>(a[0].size()) : 0;
    int t = 0;
    while (t < R && t < C) {
      // find smallest nonzero pivot
      int pr = -1, pc = -1;
      cpp_int best = 0;
      for (int i = t; i < R; ++i)
        for (int j = t; j < C; ++j)
          if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < best)) {
            best = abs(a[i][j]);
            pr = i;
            pc = j;
          }
      if (pr < 0) break;
      std::swap(a[t], a[pr]);
      for (int i = 0; i < R; ++i) std::swap(a[i][t], a[i][pc]);
      bool clean = true;
      for (int i = t + 1; i < R; ++i) {
        if (a[i][t] == 0) continue;
        cpp_int q = a[i][t] / a[t][t];
        for (int j = t; j < C; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < C; ++j) {
        if (a[t][j] == 0) continue;
        cpp_int q = a[t][j] / a[t][t];
        for (int i = t; i < R; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;  // remainder left somewhere; repeat with smaller pivot
      // pivot must divide the rest of the block for true Smith form
      bool divides = true;
      for (int i = t + 1; i < R && divides; ++i)
        for (int j = t + 1; j < C && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            // fold offending row into pivot row and restart this pivot
            for (int k = t; k < C; ++k) a[t][k] += a[i][k];
            divides = false;
          }
      if (!divides) continue;
      diag.push_back(a[t][t]);
      ++t;
    }
  }

  std::map<int, std::map<int, cpp_int>> rows_;
  std::map<int, std::set<int>> col_support_;
  std::set<std::pair<std::size_t, int>> by_size_;
};

}  // namespace

std::vector<long long> smith_invariants(const SparseIntMatrix& m) {
  SmithReducer red(m);
  return red.run();
}

namespace {

// Boundary matrix from k-simplices to (k-1)-simplices with the standard
// alternating signs on sorted vertex tuples.
SparseIntMatrix boundary_matrix(const std::vector<std::vector<VertexId>>& lower,
                                const std::vector<std::vector<VertexId>>& upper) {
  std::map<std::vector<VertexId>, int> index;
  for (int i = 0; i < static_cast<int>(lower.size()); ++i) index[lower[i]] = i;
  SparseIntMatrix m;
  m.rows = static_cast<int>(lower.size());
  m.cols = static_cast<int>(upper.size());
  m.entries.resize(m.cols);
  for (int j = 0; j < m.cols; ++j) {
    const auto& s = upper[j];
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<VertexId> face;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop) face.push_back(s[i]);
      auto it = index.find(face);
      check_internal(it != index.end(), "boundary face missing");
      m.entries[j].push_back({it->second, (drop % 2 == 0) ? 1 : -1});
    }
  }
  return m;
}

}  // namespace

HomologyProfile homology(const Triangulation& t) {
  int d = t.dim();
  // Collect all simplices per dimension.
  std::vector<std::vector<std::vector<VertexId>>> simp(d + 1);
  for (VertexId v : t.vertices()) simp[0].push_back({v});
  for (const auto& e : t.edges()) simp[1].push_back({e[0], e[1]});
  if (d >= 2)
    for (const auto& f : t.triangles()) simp[2].push_back({f[0], f[1], f[2]});
  if (d == 3)
    for (const auto& tt : t.tops())
      simp[3].push_back({tt[0], tt[1], tt[2], tt[3]});
  for (auto& v : simp) std::sort(v.begin(), v.end());

  std::vector<std::vector<long long>> inv(d + 1);  // invariants of d_k
  std::vector<int> rank(d + 2, 0);
  for (int k = 1; k <= d; ++k) {
    auto m = boundary_matrix(simp[k - 1], simp[k]);
    inv[k] = smith_invariants(m);
    rank[k] = static_cast<int>(inv[k].size());
  }
  HomologyProfile h;
  h.free_rank.resize(d + 1);
  h.torsion.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    int n_k = static_cast<int>(simp[k].size());
    int rank_in = (k + 1 <= d) ? rank[k + 1] : 0;
    h.free_rank[k] = n_k - rank[k] - rank_in;
    if (k + 1 <= d)
      for (long long q : inv[k + 1])
        if (q > 1) h.torsion[k].push_back(q);
    std::sort(h.torsion[k].begin(), h.torsion[k].end());
  }
  return h;
}

HomologyProfile sphere3_homology() {
  HomologyProfile h;
  h.free_rank = {1, 0, 0, 1};
  h.torsion = {{}, {}, {}, {}};
  return h;
}

HomologyProfile projective3_homology() {
  HomologyProfile h;
  h.free_rank = {1, 0, 0, 1};
  h.torsion = {{}, {2}, {}, {}};
  return h;
}

HomologyProfile projective_plane_homology() {
  HomologyProfile h;
  h.free_rank = {1, 0, 0};
  h.torsion = {{}, {2}, {}};
  return h;
}

}  // namespace p3
