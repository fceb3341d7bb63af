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
 * @file matching.hpp
 * @brief Perfect matchings of the torus grid: validation, enumeration,
 *        profiles, parity types and the JSON text format.
 *
 * Text format (one JSON object, edges sorted by origin row, origin column,
 * then direction with "H" before "V"):
 *
 *     {"m":4,"n":4,"edges":[[0,0,"H"],[0,2,"H"],...]}
 */

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "torus_match/errors.hpp"
#include "torus_match/torus_grid.hpp"

namespace torus_match {

using EdgeList = std::vector<GridEdge>;

/// True iff every node of the torus is covered by exactly one edge.
/// Throws invalid_input for an edge whose origin is out of range.
inline bool is_perfect_matching(const TorusDims& d, std::span<const GridEdge> edges) {
  for (const auto& e : edges) require_edge(d, e);
  if (edges.size() * 2 != static_cast<std::size_t>(d.node_count())) return false;
  std::vector<char> covered(d.node_count(), 0);
  for (const auto& e : edges) {
    for (const Node& v : {e.origin, e.head(d)}) {
      char& c = covered[index_of(d, v)];
      if (c) return false;
      c = 1;
    }
  }
  return true;
}

class PerfectMatching {
 public:
  /// Throws invalid_input unless `edges` is a perfect matching of `d`.
  static PerfectMatching from_edges(const TorusDims& d, std::span<const GridEdge> edges) {
    if (!is_perfect_matching(d, edges)) {
      throw invalid_input("edge set is not a perfect matching");
    }
    std::vector<int> mate(d.node_count(), -1);
    for (const auto& e : edges) {
      const int a = index_of(d, e.origin);
      const int b = index_of(d, e.head(d));
      mate[a] = b;
      mate[b] = a;
    }
    return PerfectMatching(d, std::move(mate));
  }

  /// Takes a partner table indexed row-major; throws invalid_input unless it
  /// is a symmetric, fixed-point-free pairing of adjacent nodes.
  static PerfectMatching from_mates(const TorusDims& d, std::vector<int> mate) {
    if (mate.size() != static_cast<std::size_t>(d.node_count())) {
      throw invalid_input("partner table has wrong size");
    }
    for (int v = 0; v < d.node_count(); ++v) {
      const int u = mate[v];
      if (u < 0 || u >= d.node_count() || u == v || mate[u] != v ||
          !adjacent(d, node_at(d, v), node_at(d, u))) {
        throw invalid_input("partner table is not a perfect matching");
      }
    }
    return PerfectMatching(d, std::move(mate));
  }

  const TorusDims& dims() const { return dims_; }
  std::span<const int> mates() const { return mate_; }

  Node partner(const Node& v) const {
    require_node(dims_, v);
    return node_at(dims_, mate_[index_of(dims_, v)]);
  }

  bool contains(const GridEdge& e) const {
    require_edge(dims_, e);
    return mate_[index_of(dims_, e.origin)] == index_of(dims_, e.head(dims_));
  }

  /// Canonical edges, sorted.
  EdgeList edges() const {
    EdgeList out;
    out.reserve(mate_.size() / 2);
    for (int v = 0; v < dims_.node_count(); ++v) {
      const int u = mate_[v];
      const Node a = node_at(dims_, v);
      const Node b = node_at(dims_, u);
      if (shifted(dims_, a, 0, 1) == b) out.push_back({a, Direction::Horizontal});
      else if (shifted(dims_, a, 1, 0) == b) out.push_back({a, Direction::Vertical});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const PerfectMatching&, const PerfectMatching&) = default;

 private:
  template <typename Visitor>
  friend class detail_enumerator;

  PerfectMatching(const TorusDims& d, std::vector<int> mate)
      : dims_(d), mate_(std::move(mate)) {}

  TorusDims dims_;
  std::vector<int> mate_;
};

// ---------------------------------------------------------------------------
// Profiles and types

/// Edge counts per horizontal cycle (h, indexed by row) and per vertical
/// cycle (v, indexed by column).
struct Profile {
  std::vector<int> h;
  std::vector<int> v;

  bool positive() const {
    return std::all_of(h.begin(), h.end(), [](int x) { return x > 0; }) &&
           std::all_of(v.begin(), v.end(), [](int x) { return x > 0; });
  }

  friend auto operator<=>(const Profile&, const Profile&) = default;
};

inline Profile profile(const PerfectMatching& M) {
  const auto& d = M.dims();
  Profile p{std::vector<int>(d.rows(), 0), std::vector<int>(d.cols(), 0)};
  for (const auto& e : M.edges()) {
    if (e.dir == Direction::Horizontal) ++p.h[e.origin.row];
    else ++p.v[e.origin.col];
  }
  return p;
}

/// Parity class of a matching; the underlying value is
/// 2 * (|M & A| odd) + (|M & B| odd).
enum class MatchType : std::uint8_t { EE = 0, EO = 1, OE = 2, OO = 3 };

inline MatchType match_type_from_parities(bool a_odd, bool b_odd) {
  return static_cast<MatchType>((a_odd ? 2 : 0) + (b_odd ? 1 : 0));
}

inline const char* to_string(MatchType t) {
  static constexpr std::array<const char*, 4> names{"EE", "EO", "OE", "OO"};
  return names[static_cast<int>(t)];
}

inline int count_in_layer_a(const TorusDims& d, std::span<const GridEdge> edges) {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [&](const GridEdge& e) { return in_layer_a(d, e); }));
}

inline int count_in_layer_b(const TorusDims& d, std::span<const GridEdge> edges) {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [&](const GridEdge& e) { return in_layer_b(d, e); }));
}

inline MatchType type_of(const PerfectMatching& M) {
  const auto es = M.edges();
  return match_type_from_parities(count_in_layer_a(M.dims(), es) % 2 == 1,
                                  count_in_layer_b(M.dims(), es) % 2 == 1);
}

// ---------------------------------------------------------------------------
// Enumeration
//
// Backtracking in row-major order: the first uncovered node is matched to
// each uncovered neighbour in the order right, down, left, up. The first
// node (0,0) always has four choices; `branch` restricts the search to one of
// them so independent workers can split the enumeration.

inline constexpr int kBranchCount = 4;

template <typename Visitor>
class detail_enumerator {
 public:
  detail_enumerator(const TorusDims& d, Visitor& visit)
      : dims_(d), visit_(visit), mate_(d.node_count(), -1) {}

  void run(std::optional<int> branch) { descend(0, branch); }

 private:
  void descend(int pos, std::optional<int> branch) {
    while (pos < dims_.node_count() && mate_[pos] >= 0) ++pos;
    if (pos == dims_.node_count()) {
      const PerfectMatching M(dims_, mate_);
      visit_(M);
      return;
    }
    const auto nb = neighbors(dims_, node_at(dims_, pos));
    for (int k = 0; k < 4; ++k) {
      if (branch && pos == 0 && k != *branch) continue;
      const int u = index_of(dims_, nb[k]);
      if (mate_[u] >= 0) continue;
      mate_[pos] = u;
      mate_[u] = pos;
      descend(pos + 1, std::nullopt);
      mate_[pos] = -1;
      mate_[u] = -1;
    }
  }

  TorusDims dims_;
  Visitor& visit_;
  std::vector<int> mate_;
};

/// Streams every perfect matching of `d` exactly once to `visit`.
template <typename Visitor>
void enumerate(const TorusDims& d, Visitor&& visit, std::optional<int> branch = std::nullopt) {
  detail_enumerator<std::remove_reference_t<Visitor>> e(d, visit);
  e.run(branch);
}

/// Memoised completion counter over coverage bitmasks, using the same
/// branching rule as `enumerate`. Supports grids with at most 64 nodes.
/// Drives exact uniform sampling: a completion is chosen branch by branch
/// with probability proportional to the number of completions below it.
class CompletionCounter {
 public:
  explicit CompletionCounter(const TorusDims& d) : dims_(d) {
    if (d.node_count() > 64) {
      throw invalid_input("completion counting supports at most 64 nodes");
    }
    full_ = d.node_count() == 64 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << d.node_count()) - 1;
    for (int v = 0; v < d.node_count(); ++v) {
      const auto nb = neighbors(d, node_at(d, v));
      for (int k = 0; k < 4; ++k) nbr_[v][k] = index_of(d, nb[k]);
    }
  }

  std::uint64_t total() { return count(0); }

  /// One uniformly random perfect matching.
  template <typename Rng>
  PerfectMatching sample(Rng& rng) {
    std::uint64_t mask = 0;
    std::vector<int> mate(dims_.node_count(), -1);
    while (mask != full_) {
      const int v = std::countr_one(mask);
      std::uniform_int_distribution<std::uint64_t> pick(0, count(mask) - 1);
      std::uint64_t ticket = pick(rng);
      for (int k = 0; k < 4; ++k) {
        const int u = nbr_[v][k];
        if (mask >> u & 1U) continue;
        const std::uint64_t child = mask | bit(v) | bit(u);
        const std::uint64_t c = count(child);
        if (ticket < c) {
          mate[v] = u;
          mate[u] = v;
          mask = child;
          break;
        }
        ticket -= c;
      }
    }
    return PerfectMatching::from_mates(dims_, std::move(mate));
  }

 private:
  static std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

  std::uint64_t count(std::uint64_t mask) {
    if (mask == full_) return 1;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const int v = std::countr_one(mask);
    std::uint64_t total = 0;
    for (int k = 0; k < 4; ++k) {
      const int u = nbr_[v][k];
      if (mask >> u & 1U) continue;
      total += count(mask | bit(v) | bit(u));
    }
    memo_.emplace(mask, total);
    return total;
  }

  TorusDims dims_;
  std::uint64_t full_ = 0;
  std::array<std::array<int, 4>, 64> nbr_{};
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

// ---------------------------------------------------------------------------
// Text format

inline nlohmann::ordered_json to_json(const PerfectMatching& M) {
  nlohmann::ordered_json j;
  j["m"] = M.dims().rows();
  j["n"] = M.dims().cols();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : M.edges()) {
    edges.push_back({e.origin.row, e.origin.col, e.dir == Direction::Horizontal ? "H" : "V"});
  }
  j["edges"] = std::move(edges);
  return j;
}

inline std::string serialize(const PerfectMatching& M) { return to_json(M).dump(); }

/// Throws parse_error for malformed text, bad dimensions, out-of-range or
/// duplicate edges, and edge sets that are not perfect matchings. Unknown
/// top-level keys are ignored.
inline PerfectMatching from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw parse_error("matching must be a JSON object");
  for (const char* key : {"m", "n", "edges"}) {
    if (!j.contains(key)) throw parse_error(std::string("missing key \"") + key + "\"");
  }
  if (!j["m"].is_number_integer() || !j["n"].is_number_integer()) {
    throw parse_error("\"m\" and \"n\" must be integers");
  }
  std::optional<TorusDims> dims;
  try {
    dims = TorusDims::make(j["m"].get<int>(), j["n"].get<int>());
  } catch (const invalid_input& e) {
    throw parse_error(e.what());
  }
  if (!j["edges"].is_array()) throw parse_error("\"edges\" must be an array");

  EdgeList edges;
  for (const auto& item : j["edges"]) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_string()) {
      throw parse_error("edge must be [row, col, \"H\"|\"V\"]");
    }
    const auto dir = item[2].get<std::string>();
    if (dir != "H" && dir != "V") throw parse_error("edge direction must be \"H\" or \"V\"");
    const GridEdge e{{item[0].get<int>(), item[1].get<int>()},
                     dir == "H" ? Direction::Horizontal : Direction::Vertical};
    if (!in_range(*dims, e.origin)) throw parse_error("edge origin out of range");
    edges.push_back(e);
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw parse_error("duplicate edge");
  }
  if (!is_perfect_matching(*dims, sorted)) throw parse_error("edges do not form a perfect matching");
  return PerfectMatching::from_edges(*dims, sorted);
}

inline PerfectMatching deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

}  // namespace torus_match
