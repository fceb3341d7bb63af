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
 * @file transfer_digraph.hpp
 * @brief The out-degree-one successor digraph of a perfect matching.
 *
 * A black node steps to its partner. A white node v matched to u steps to the
 * node w on the far side of v from u along the line through u and v, so the
 * walk continues straight through every white node.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "torus_match/matching.hpp"
#include "torus_match/torus_grid.hpp"

namespace torus_match {

class TransferDigraph {
 public:
  explicit TransferDigraph(const PerfectMatching& M) : dims_(M.dims()) {
    const auto mate = M.mates();
    succ_.resize(mate.size());
    for (int vi = 0; vi < dims_.node_count(); ++vi) {
      const Node v = node_at(dims_, vi);
      if (v.is_black()) {
        succ_[vi] = mate[vi];
        continue;
      }
      const Node u = node_at(dims_, mate[vi]);
      // Step away from u: w = v + (v - u), with the difference taken mod (m, n).
      int dr = v.row - u.row;
      int dc = v.col - u.col;
      if (dr > 1) dr -= dims_.rows();
      if (dr < -1) dr += dims_.rows();
      if (dc > 1) dc -= dims_.cols();
      if (dc < -1) dc += dims_.cols();
      succ_[vi] = index_of(dims_, shifted(dims_, v, dr, dc));
    }
  }

  const TorusDims& dims() const { return dims_; }

  Node successor(const Node& v) const {
    require_node(dims_, v);
    return node_at(dims_, succ_[index_of(dims_, v)]);
  }

  std::span<const int> successors() const { return succ_; }

 private:
  TorusDims dims_;
  std::vector<int> succ_;
};

inline TransferDigraph build(const PerfectMatching& M) { return TransferDigraph(M); }

/// Parity class of a dicycle; the underlying value is
/// 2 * (|U(C) & A| odd) + (|U(C) & B| odd), aligned with MatchType.
enum class CycleType : std::uint8_t { ee = 0, eo = 1, oe = 2, oo = 3 };

inline const char* to_string(CycleType t) {
  static constexpr std::array<const char*, 4> names{"ee", "eo", "oe", "oo"};
  return names[static_cast<int>(t)];
}

inline MatchType uppercase(CycleType t) { return static_cast<MatchType>(t); }
inline CycleType lowercase(MatchType t) { return static_cast<CycleType>(t); }

struct DiCycle {
  /// Successor order, rotated to start at the cycle's smallest node.
  std::vector<Node> nodes;
  /// Undirected edges of the cycle, sorted.
  EdgeList shadow;

  GridCycle as_grid_cycle() const { return GridCycle{nodes}; }

  std::vector<Node> sorted_nodes() const {
    auto out = nodes;
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// All cycles of the digraph, ordered by their smallest node.
inline std::vector<DiCycle> dicycles(const TransferDigraph& D) {
  const auto& d = D.dims();
  const auto succ = D.successors();
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> mark(succ.size(), kWhite);
  std::vector<DiCycle> out;

  for (int start = 0; start < d.node_count(); ++start) {
    if (mark[start] != kWhite) continue;
    int v = start;
    while (mark[v] == kWhite) {
      mark[v] = kGrey;
      v = succ[v];
    }
    if (mark[v] == kGrey) {
      // v closes a new cycle on the current walk.
      DiCycle c;
      int w = v;
      do {
        c.nodes.push_back(node_at(d, w));
        w = succ[w];
      } while (w != v);
      std::rotate(c.nodes.begin(), std::min_element(c.nodes.begin(), c.nodes.end()),
                  c.nodes.end());
      c.shadow = cycle_edges(d, c.as_grid_cycle());
      std::sort(c.shadow.begin(), c.shadow.end());
      out.push_back(std::move(c));
    }
    for (int w = start; mark[w] == kGrey; w = succ[w]) mark[w] = kBlack;
  }
  std::sort(out.begin(), out.end(),
            [](const DiCycle& a, const DiCycle& b) { return a.nodes.front() < b.nodes.front(); });
  return out;
}

/// Index of the cycle whose sorted node list is lexicographically smallest.
/// Depends only on node sets, so reversing every cycle selects the same one.
inline std::size_t first_by_node_set(std::span<const DiCycle> cycles) {
  if (cycles.empty()) throw invalid_input("no cycles to order");
  std::size_t best = 0;
  auto best_key = cycles[0].sorted_nodes();
  for (std::size_t k = 1; k < cycles.size(); ++k) {
    auto key = cycles[k].sorted_nodes();
    if (key < best_key) {
      best = k;
      best_key = std::move(key);
    }
  }
  return best;
}

inline DiCycle canonical_first(const TransferDigraph& D) {
  auto cycles = dicycles(D);
  return std::move(cycles[first_by_node_set(cycles)]);
}

inline CycleType cycle_type(const TorusDims& d, const DiCycle& c) {
  const bool a_odd = count_in_layer_a(d, c.shadow) % 2 == 1;
  const bool b_odd = count_in_layer_b(d, c.shadow) % 2 == 1;
  return static_cast<CycleType>((a_odd ? 2 : 0) + (b_odd ? 1 : 0));
}

/// True iff consecutive edges of the cycle alternate between M and not-M.
inline bool alternates(const PerfectMatching& M, const DiCycle& c) {
  const auto& d = M.dims();
  const std::size_t len = c.nodes.size();
  if (len % 2 != 0) return false;
  bool prev = false;
  for (std::size_t k = 0; k < len; ++k) {
    const bool in_m = M.contains(edge_between(d, c.nodes[k], c.nodes[(k + 1) % len]));
    if (k > 0 && in_m == prev) return false;
    prev = in_m;
  }
  return true;
}

}  // namespace torus_match
