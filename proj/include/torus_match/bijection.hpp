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
 * @file bijection.hpp
 * @brief The even/odd involution phi(M) = M xor U(C_M) and the embedding of
 *        a matching into a grid four rows and columns larger.
 */

#pragma once

#include <algorithm>
#include <iterator>
#include <string>
#include <vector>

#include "torus_match/errors.hpp"
#include "torus_match/matching.hpp"
#include "torus_match/transfer_digraph.hpp"

namespace torus_match {

/// Raw symmetric difference of M with the shadow of its canonical dicycle.
inline EdgeList phi_edges(const PerfectMatching& M) {
  const auto shadow = canonical_first(build(M)).shadow;
  const auto own = M.edges();
  EdgeList out;
  std::set_symmetric_difference(own.begin(), own.end(), shadow.begin(), shadow.end(),
                                std::back_inserter(out));
  return out;
}

enum class PhiMode { Verified, Fast };

/// In Verified mode the profile and type postconditions are checked and a
/// violation throws internal_error.
inline PerfectMatching phi(const PerfectMatching& M, PhiMode mode = PhiMode::Verified) {
  if (mode == PhiMode::Fast) return PerfectMatching::from_edges(M.dims(), phi_edges(M));

  const auto cm = canonical_first(build(M));
  const auto own = M.edges();
  EdgeList diff;
  std::set_symmetric_difference(own.begin(), own.end(), cm.shadow.begin(), cm.shadow.end(),
                                std::back_inserter(diff));
  if (!is_perfect_matching(M.dims(), diff)) {
    throw internal_error("phi produced a non-matching: " + serialize(M));
  }
  auto result = PerfectMatching::from_edges(M.dims(), diff);
  if (profile(result) != profile(M)) {
    throw internal_error("phi changed the profile of " + serialize(M));
  }
  const MatchType before = type_of(M);
  const MatchType after = type_of(result);
  if (before == MatchType::EE) {
    if (after != uppercase(cycle_type(M.dims(), cm))) {
      throw internal_error("phi image type disagrees with cycle type for " + serialize(M));
    }
  } else if (after != MatchType::EE) {
    throw internal_error("phi mapped an odd matching to an odd matching: " + serialize(M));
  }
  return result;
}

/// C_M has no horizontal edge inside row 0 or row m-1 and no vertical edge
/// inside column 0 or column n-1.
inline bool is_well_behaved(const PerfectMatching& M) {
  const auto& d = M.dims();
  for (const auto& e : canonical_first(build(M)).shadow) {
    if (e.dir == Direction::Horizontal) {
      if (e.origin.row == 0 || e.origin.row == d.rows() - 1) return false;
    } else if (e.origin.col == 0 || e.origin.col == d.cols() - 1) {
      return false;
    }
  }
  return true;
}

/// Lifts a matching of the m x n torus to a well-behaved matching of the
/// (m+4) x (n+4) torus with the same matching type and canonical cycle type.
///
/// Every non-seam edge moves by (+2, +2). A seam edge of layer A in column j
/// becomes the alternating run (m+1,m+2) (m+3,0) (1,2) in column j+2, whose
/// middle edge is the new layer-A edge; columns without a seam edge are
/// closed by (m+2,m+3) (0,1). Rows are treated the same way for layer B, and
/// the four 2x2 corner blocks get two vertical edges each.
inline PerfectMatching embed_well_behaved(const PerfectMatching& M) {
  const auto& d = M.dims();
  const int m = d.rows();
  const int n = d.cols();
  const auto big = TorusDims::make(m + 4, n + 4);

  EdgeList out;
  std::vector<bool> seam_col(n + 4, false);
  std::vector<bool> seam_row(m + 4, false);
  for (const auto& e : M.edges()) {
    if (in_layer_a(d, e)) {
      seam_col[e.origin.col + 2] = true;
    } else if (in_layer_b(d, e)) {
      seam_row[e.origin.row + 2] = true;
    } else {
      out.push_back({{e.origin.row + 2, e.origin.col + 2}, e.dir});
    }
  }

  const auto vertical = [&](int row, int col) { out.push_back({{row, col}, Direction::Vertical}); };
  const auto horizontal = [&](int row, int col) { out.push_back({{row, col}, Direction::Horizontal}); };

  for (int col = 2; col <= n + 1; ++col) {
    if (seam_col[col]) {
      vertical(m + 1, col);
      vertical(m + 3, col);
      vertical(1, col);
    } else {
      vertical(m + 2, col);
      vertical(0, col);
    }
  }
  for (int row = 2; row <= m + 1; ++row) {
    if (seam_row[row]) {
      horizontal(row, n + 1);
      horizontal(row, n + 3);
      horizontal(row, 1);
    } else {
      horizontal(row, n + 2);
      horizontal(row, 0);
    }
  }
  for (int row : {0, m + 2}) {
    for (int col : {0, 1, n + 2, n + 3}) vertical(row, col);
  }

  std::sort(out.begin(), out.end());
  if (!is_perfect_matching(big, out)) {
    throw internal_error("embedding is not a perfect matching for " + serialize(M));
  }
  auto lifted = PerfectMatching::from_edges(big, out);
  if (type_of(lifted) != type_of(M)) {
    throw internal_error("embedding changed the matching type of " + serialize(M));
  }
  if (cycle_type(big, canonical_first(build(lifted))) != cycle_type(d, canonical_first(build(M)))) {
    throw internal_error("embedding changed the canonical cycle type of " + serialize(M));
  }
  if (!is_well_behaved(lifted)) {
    throw internal_error("embedding is not well behaved for " + serialize(M));
  }
  return lifted;
}

}  // namespace torus_match
