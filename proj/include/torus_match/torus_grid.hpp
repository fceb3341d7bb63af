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
 * @file torus_grid.hpp
 * @brief Geometry of the toroidal square grid with m rows and n columns.
 *
 * Rows are indexed top to bottom, columns left to right, and all node
 * arithmetic wraps modulo (m, n). Two seam layers are distinguished:
 *
 *   - layer A: the vertical edges joining row m-1 to row 0,
 *   - layer B: the horizontal edges joining column n-1 to column 0.
 *
 * A node is black when row+col is even. A node is an "even node" when both
 * its row and column indices are even and an "odd node" when both are odd.
 */

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "torus_match/errors.hpp"

namespace torus_match {

/// Even grid dimensions, both at least 4.
class TorusDims {
 public:
  /// Throws invalid_input unless m and n are even and >= 4.
  static TorusDims make(int m, int n) {
    if (m < 4 || n < 4 || m % 2 != 0 || n % 2 != 0) {
      throw invalid_input("torus dimensions must be even and >= 4, got " +
                          std::to_string(m) + "x" + std::to_string(n));
    }
    return TorusDims(m, n);
  }

  int rows() const { return m_; }
  int cols() const { return n_; }
  int node_count() const { return m_ * n_; }

  friend bool operator==(const TorusDims&, const TorusDims&) = default;

 private:
  TorusDims(int m, int n) : m_(m), n_(n) {}
  int m_;
  int n_;
};

struct Node {
  int row = 0;
  int col = 0;

  bool is_black() const { return (row + col) % 2 == 0; }

  // Row-major order.
  friend auto operator<=>(const Node&, const Node&) = default;
};

enum class NodeParity { Even, Odd, Mixed };

inline NodeParity parity_of(const Node& v) {
  const bool row_even = v.row % 2 == 0;
  const bool col_even = v.col % 2 == 0;
  if (row_even && col_even) return NodeParity::Even;
  if (!row_even && !col_even) return NodeParity::Odd;
  return NodeParity::Mixed;
}

inline const char* to_string(NodeParity p) {
  switch (p) {
    case NodeParity::Even: return "even";
    case NodeParity::Odd: return "odd";
    case NodeParity::Mixed: return "mixed";
  }
  return "?";
}

inline bool in_range(const TorusDims& d, const Node& v) {
  return v.row >= 0 && v.row < d.rows() && v.col >= 0 && v.col < d.cols();
}

inline void require_node(const TorusDims& d, const Node& v) {
  if (!in_range(d, v)) {
    throw invalid_input("node (" + std::to_string(v.row) + "," +
                        std::to_string(v.col) + ") outside torus " +
                        std::to_string(d.rows()) + "x" +
                        std::to_string(d.cols()));
  }
}

inline int index_of(const TorusDims& d, const Node& v) {
  return v.row * d.cols() + v.col;
}

inline Node node_at(const TorusDims& d, int index) {
  return Node{index / d.cols(), index % d.cols()};
}

inline int wrap(int x, int period) { return ((x % period) + period) % period; }

inline Node shifted(const TorusDims& d, const Node& v, int drow, int dcol) {
  return Node{wrap(v.row + drow, d.rows()), wrap(v.col + dcol, d.cols())};
}

/// The four neighbours in the order right, down, left, up.
inline std::array<Node, 4> neighbors(const TorusDims& d, const Node& v) {
  require_node(d, v);
  return {shifted(d, v, 0, 1), shifted(d, v, 1, 0), shifted(d, v, 0, -1),
          shifted(d, v, -1, 0)};
}

inline bool adjacent(const TorusDims& d, const Node& u, const Node& v) {
  const auto nb = neighbors(d, u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

enum class Direction : std::uint8_t { Horizontal, Vertical };

/// Undirected grid edge in canonical form: a Horizontal edge joins origin to
/// the node one column to the right, a Vertical edge joins origin to the node
/// one row below.
struct GridEdge {
  Node origin;
  Direction dir = Direction::Horizontal;

  Node head(const TorusDims& d) const {
    return dir == Direction::Horizontal ? shifted(d, origin, 0, 1)
                                        : shifted(d, origin, 1, 0);
  }

  friend auto operator<=>(const GridEdge&, const GridEdge&) = default;
};

inline bool in_layer_a(const TorusDims& d, const GridEdge& e) {
  return e.dir == Direction::Vertical && e.origin.row == d.rows() - 1;
}

inline bool in_layer_b(const TorusDims& d, const GridEdge& e) {
  return e.dir == Direction::Horizontal && e.origin.col == d.cols() - 1;
}

/// Canonical edge between two adjacent nodes. Throws invalid_input if the
/// nodes are not adjacent.
inline GridEdge edge_between(const TorusDims& d, const Node& u, const Node& v) {
  require_node(d, u);
  require_node(d, v);
  if (shifted(d, u, 0, 1) == v) return {u, Direction::Horizontal};
  if (shifted(d, v, 0, 1) == u) return {v, Direction::Horizontal};
  if (shifted(d, u, 1, 0) == v) return {u, Direction::Vertical};
  if (shifted(d, v, 1, 0) == u) return {v, Direction::Vertical};
  throw invalid_input("nodes are not adjacent");
}

inline void require_edge(const TorusDims& d, const GridEdge& e) {
  require_node(d, e.origin);
}

/// Simple closed walk in the grid, stored as its cyclic node sequence.
struct GridCycle {
  std::vector<Node> nodes;
};

/// True iff the cycle has at least 4 distinct nodes, all in range, with
/// consecutive nodes adjacent (including last to first).
inline bool is_simple_cycle(const TorusDims& d, const GridCycle& c) {
  const auto& ns = c.nodes;
  if (ns.size() < 4) return false;
  std::set<Node> seen;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (!in_range(d, ns[k]) || !seen.insert(ns[k]).second) return false;
    if (!adjacent(d, ns[k], ns[(k + 1) % ns.size()])) return false;
  }
  return true;
}

inline std::vector<GridEdge> cycle_edges(const TorusDims& d,
                                         const GridCycle& c) {
  std::vector<GridEdge> out;
  out.reserve(c.nodes.size());
  for (std::size_t k = 0; k < c.nodes.size(); ++k) {
    out.push_back(edge_between(d, c.nodes[k], c.nodes[(k + 1) % c.nodes.size()]));
  }
  return out;
}

struct Corner {
  Node node;
  NodeParity parity;

  friend bool operator==(const Corner&, const Corner&) = default;
};

/// Nodes where the cycle switches between a horizontal and a vertical step,
/// in cycle order.
inline std::vector<Corner> corners(const GridCycle& c) {
  std::vector<Corner> out;
  const auto& ns = c.nodes;
  const std::size_t len = ns.size();
  for (std::size_t k = 0; k < len; ++k) {
    const Node& prev = ns[(k + len - 1) % len];
    const Node& here = ns[k];
    const Node& next = ns[(k + 1) % len];
    const bool in_horizontal = prev.row == here.row;
    const bool out_horizontal = here.row == next.row;
    if (in_horizontal != out_horizontal) out.push_back({here, parity_of(here)});
  }
  return out;
}

enum class Traversal { Forward, Reverse };

/// Signed seam crossings: `vertical` counts layer-A steps (row m-1 -> 0 is
/// +1), `horizontal` counts layer-B steps (column n-1 -> 0 is +1).
struct Winding {
  int vertical = 0;
  int horizontal = 0;

  bool contractible() const { return vertical == 0 && horizontal == 0; }
  friend bool operator==(const Winding&, const Winding&) = default;
};

inline Winding winding(const TorusDims& d, const GridCycle& c,
                       Traversal t = Traversal::Forward) {
  Winding w;
  const auto& ns = c.nodes;
  const std::size_t len = ns.size();
  for (std::size_t k = 0; k < len; ++k) {
    Node from = ns[k];
    Node to = ns[(k + 1) % len];
    if (t == Traversal::Reverse) std::swap(from, to);
    if (from.row == d.rows() - 1 && to.row == 0 && from.col == to.col) ++w.vertical;
    if (from.row == 0 && to.row == d.rows() - 1 && from.col == to.col) --w.vertical;
    if (from.col == d.cols() - 1 && to.col == 0 && from.row == to.row) ++w.horizontal;
    if (from.col == 0 && to.col == d.cols() - 1 && from.row == to.row) --w.horizontal;
  }
  return w;
}

/// Nodes strictly inside the disk bounded by a simple contractible cycle.
///
/// The cycle is unrolled into the plane by accumulating its unit steps; with
/// zero winding the lift closes up. Lattice points enclosed by the lift are
/// found with a crossing-parity ray cast and projected back onto the torus.
inline std::set<Node> disk_interior(const TorusDims& d, const GridCycle& c) {
  if (!is_simple_cycle(d, c)) {
    throw precondition_violation("disk_interior needs a simple cycle");
  }
  if (!winding(d, c).contractible()) {
    throw precondition_violation("disk_interior needs a contractible cycle");
  }

  const auto& ns = c.nodes;
  const std::size_t len = ns.size();
  std::vector<std::pair<long, long>> lift(len);
  lift[0] = {ns[0].row, ns[0].col};
  for (std::size_t k = 1; k < len; ++k) {
    long dr = ns[k].row - ns[k - 1].row;
    long dc = ns[k].col - ns[k - 1].col;
    if (dr > 1) dr -= d.rows();
    if (dr < -1) dr += d.rows();
    if (dc > 1) dc -= d.cols();
    if (dc < -1) dc += d.cols();
    lift[k] = {lift[k - 1].first + dr, lift[k - 1].second + dc};
  }

  long rmin = lift[0].first, rmax = rmin, cmin = lift[0].second, cmax = cmin;
  std::set<std::pair<long, long>> on_cycle;
  // Vertical unit segments keyed by (upper row, column).
  std::set<std::pair<long, long>> vertical_segments;
  for (std::size_t k = 0; k < len; ++k) {
    const auto& a = lift[k];
    const auto& b = lift[(k + 1) % len];
    rmin = std::min(rmin, a.first);
    rmax = std::max(rmax, a.first);
    cmin = std::min(cmin, a.second);
    cmax = std::max(cmax, a.second);
    on_cycle.insert(a);
    if (a.second == b.second) {
      vertical_segments.insert({std::min(a.first, b.first), a.second});
    }
  }

  std::set<Node> inside;
  for (long r = rmin + 1; r < rmax; ++r) {
    for (long col = cmin + 1; col < cmax; ++col) {
      if (on_cycle.count({r, col})) continue;
      // Ray toward +col at height r + epsilon.
      int crossings = 0;
      for (long x = col + 1; x <= cmax; ++x) {
        if (vertical_segments.count({r, x})) ++crossings;
      }
      if (crossings % 2 == 1) {
        const Node v{wrap(static_cast<int>(r), d.rows()),
                     wrap(static_cast<int>(col), d.cols())};
        if (!inside.insert(v).second) {
          throw internal_error("disk interior overlaps itself on the torus");
        }
      }
    }
  }
  return inside;
}

/// Number of connected components of the subgraph induced by `nodes`.
inline int component_count(const TorusDims& d, const std::set<Node>& nodes) {
  std::set<Node> unvisited = nodes;
  int components = 0;
  while (!unvisited.empty()) {
    ++components;
    std::queue<Node> frontier;
    frontier.push(*unvisited.begin());
    unvisited.erase(unvisited.begin());
    while (!frontier.empty()) {
      const Node v = frontier.front();
      frontier.pop();
      for (const Node& u : neighbors(d, v)) {
        auto it = unvisited.find(u);
        if (it != unvisited.end()) {
          unvisited.erase(it);
          frontier.push(u);
        }
      }
    }
  }
  return components;
}

/// Axis-aligned rectangle traversed clockwise from its top-left corner.
/// `height` and `width` count unit steps and must be in [1, m-1] / [1, n-1].
inline GridCycle rectangle_cycle(const TorusDims& d, const Node& top_left,
                                 int height, int width) {
  require_node(d, top_left);
  if (height < 1 || height >= d.rows() || width < 1 || width >= d.cols()) {
    throw invalid_input("rectangle sides out of range");
  }
  GridCycle c;
  for (int k = 0; k < width; ++k) c.nodes.push_back(shifted(d, top_left, 0, k));
  for (int k = 0; k < height; ++k) c.nodes.push_back(shifted(d, top_left, k, width));
  for (int k = width; k > 0; --k) c.nodes.push_back(shifted(d, top_left, height, k));
  for (int k = height; k > 0; --k) c.nodes.push_back(shifted(d, top_left, k, 0));
  return c;
}

}  // namespace torus_match
