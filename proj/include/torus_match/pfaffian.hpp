/*
 * Copyright 2026 The torus-match Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file pfaffian.hpp
 * @brief Kasteleyn matrices of the torus grid and exact integer Pfaffians.
 *
 * Base orientation: horizontal edges point toward increasing column,
 * vertical edges point down in even columns and up in odd columns. Every
 * unit face away from the seams then has an odd number of clockwise edges.
 * The four matrices K(theta, tau) negate the layer-A entries when theta is
 * set and the layer-B entries when tau is set.
 *
 * Nodes are indexed row-major. The Pfaffian sign convention is
 * Pf([[0, 1], [-1, 0]]) = +1.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torus_match/errors.hpp"
#include "torus_match/matching.hpp"
#include "torus_match/torus_grid.hpp"

namespace torus_match {

using BigInt = boost::multiprecision::cpp_int;

/// Dense antisymmetric integer matrix.
class SkewMatrix {
 public:
  explicit SkewMatrix(int size) : size_(size), entries_(static_cast<std::size_t>(size) * size, 0) {
    if (size < 0) throw invalid_input("negative matrix size");
  }

  /// Throws invalid_input unless `rows` is square and antisymmetric.
  static SkewMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    SkewMatrix s(static_cast<int>(rows.size()));
    for (int i = 0; i < s.size_; ++i) {
      if (rows[i].size() != rows.size()) throw invalid_input("matrix is not square");
      for (int j = 0; j < s.size_; ++j) {
        if (rows[i][j] != -rows[j][i]) throw invalid_input("matrix is not antisymmetric");
        s.entries_[s.offset(i, j)] = rows[i][j];
      }
    }
    return s;
  }

  int size() const { return size_; }
  long long operator()(int i, int j) const { return entries_[offset(i, j)]; }

  /// Sets entry (i, j) to `value` and (j, i) to -value.
  void set(int i, int j, long long value) {
    if (i == j && value != 0) throw invalid_input("diagonal of a skew matrix is zero");
    entries_[offset(i, j)] = value;
    entries_[offset(j, i)] = -value;
  }

  int nonzeros_in_row(int i) const {
    int count = 0;
    for (int j = 0; j < size_; ++j) count += (*this)(i, j) != 0;
    return count;
  }

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(i) * size_ + j;
  }

  int size_;
  std::vector<long long> entries_;
};

/// Pfaffian by fraction-free pairwise elimination.
///
/// After eliminating the pivot pairs (0,1), ..., (2k-2,2k-1), entry (i,j)
/// holds the Pfaffian of the principal submatrix on {0..2k-1, i, j}. The
/// update from one stage to the next divides exactly by the previous pivot.
/// Throws invalid_input for odd size.
inline BigInt pfaffian_exact(const SkewMatrix& S) {
  const int n = S.size();
  if (n % 2 != 0) throw invalid_input("Pfaffian of odd-sized matrix");
  if (n == 0) return 1;

  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = S(i, j);
  }

  BigInt sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < n; k += 2) {
    int p = k + 1;
    while (p < n && a[k][p] == 0) ++p;
    if (p == n) return 0;
    if (p != k + 1) {
      std::swap(a[p], a[k + 1]);
      for (auto& row : a) std::swap(row[p], row[k + 1]);
      sign = -sign;
    }
    const BigInt pivot = a[k][k + 1];
    if (k + 2 == n) return sign * pivot;

    for (int i = k + 2; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        BigInt num = pivot * a[i][j] - a[k][i] * a[k + 1][j] + a[k][j] * a[k + 1][i];
        BigInt q, r;
        boost::multiprecision::divide_qr(num, prev, q, r);
        if (r != 0) throw internal_error("inexact division in Pfaffian elimination");
        a[i][j] = q;
        a[j][i] = -q;
      }
    }
    prev = pivot;
  }
  return sign * prev;
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
inline BigInt determinant_exact(const SkewMatrix& S) {
  const int n = S.size();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = S(i, j);
  }
  BigInt sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    int p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Orientations

struct Orientation {
  TorusDims dims;
  bool theta = false;  // negate layer A
  bool tau = false;    // negate layer B

  /// +1 if the edge points from its canonical origin to its head.
  int sign(const GridEdge& e) const {
    int s = 1;
    if (e.dir == Direction::Vertical && e.origin.col % 2 == 1) s = -s;
    if (theta && in_layer_a(dims, e)) s = -s;
    if (tau && in_layer_b(dims, e)) s = -s;
    return s;
  }
};

/// Every unit face whose four edges avoid both seam layers has an odd
/// number of edges oriented clockwise (rows grow downward).
inline bool faces_clockwise_odd(const Orientation& o) {
  const auto& d = o.dims;
  for (int r = 0; r + 1 < d.rows(); ++r) {
    for (int c = 0; c + 1 < d.cols(); ++c) {
      int clockwise = 0;
      clockwise += o.sign({{r, c}, Direction::Horizontal}) == 1;       // top, left to right
      clockwise += o.sign({{r, c + 1}, Direction::Vertical}) == 1;     // right, downward
      clockwise += o.sign({{r + 1, c}, Direction::Horizontal}) == -1;  // bottom, right to left
      clockwise += o.sign({{r, c}, Direction::Vertical}) == -1;        // left, upward
      if (clockwise % 2 == 0) return false;
    }
  }
  return true;
}

inline SkewMatrix kasteleyn_matrix(const TorusDims& d, bool theta, bool tau) {
  const Orientation o{d, theta, tau};
  SkewMatrix k(d.node_count());
  for (int i = 0; i < d.node_count(); ++i) {
    const Node v = node_at(d, i);
    for (Direction dir : {Direction::Horizontal, Direction::Vertical}) {
      const GridEdge e{v, dir};
      k.set(i, index_of(d, e.head(d)), o.sign(e));
    }
  }
  return k;
}

/// Sign of one perfect matching in the Pfaffian expansion of the
/// orientation's matrix: the sign of the pairing permutation times the
/// product of the entries K(a, b), a < b.
inline int matching_sign(const PerfectMatching& M, const Orientation& o) {
  const auto& d = M.dims();
  std::vector<std::pair<int, int>> pairs;
  int product = 1;
  for (const auto& e : M.edges()) {
    const int u = index_of(d, e.origin);
    const int v = index_of(d, e.head(d));
    const int s = o.sign(e);
    if (u < v) {
      pairs.emplace_back(u, v);
      product *= s;
    } else {
      pairs.emplace_back(v, u);
      product *= -s;
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> perm;
  perm.reserve(pairs.size() * 2);
  for (const auto& [a, b] : pairs) {
    perm.push_back(a);
    perm.push_back(b);
  }
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
  }
  return inversions % 2 == 0 ? product : -product;
}

/// Pfaffian of the orientation's matrix evaluated from its defining expansion
/// over all perfect matchings, by exhaustive enumeration.
inline BigInt signed_matching_sum(const TorusDims& d, const Orientation& o) {
  long long total = 0;
  enumerate(d, [&](const PerfectMatching& M) { total += matching_sign(M, o); });
  return total;
}

/// Flip pairs in the order used by PfaffianSummary: (0,0), (0,1), (1,0), (1,1).
inline constexpr std::array<std::pair<bool, bool>, 4> kFlipOrder{
    {{false, false}, {false, true}, {true, false}, {true, true}}};

struct PfaffianSummary {
  std::array<BigInt, 4> values;
  std::vector<int> vanishing;                     // indices into kFlipOrder
  std::vector<std::array<int, 4>> count_signs;    // eps with sum(eps * Pf) / 2 == total
  std::uint64_t total = 0;                        // enumerated matching count
};

inline std::array<BigInt, 4> kasteleyn_pfaffians(const TorusDims& d) {
  std::array<BigInt, 4> out;
  for (int k = 0; k < 4; ++k) {
    out[k] = pfaffian_exact(kasteleyn_matrix(d, kFlipOrder[k].first, kFlipOrder[k].second));
  }
  return out;
}

/// Four Pfaffians, the vanishing ones, and every sign vector whose half
/// combination reproduces `total`.
inline PfaffianSummary summarize_pfaffians(const TorusDims& d, std::uint64_t total) {
  PfaffianSummary s;
  s.total = total;
  s.values = kasteleyn_pfaffians(d);
  for (int k = 0; k < 4; ++k) {
    if (s.values[k] == 0) s.vanishing.push_back(k);
  }
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> eps{};
    BigInt sum = 0;
    for (int k = 0; k < 4; ++k) {
      eps[k] = (mask >> k & 1) ? -1 : 1;
      sum += eps[k] * s.values[k];
    }
    if (sum == 2 * BigInt(total)) s.count_signs.push_back(eps);
  }
  return s;
}

}  // namespace torus_match
