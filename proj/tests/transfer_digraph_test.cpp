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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support/oracles.hpp"
#include "torus_match/bijection.hpp"
#include "torus_match/transfer_digraph.hpp"

namespace tmatch = torus_match;
using tmatch::CycleType;
using tmatch::Node;
using tmatch::testing::all_vertical;
using tmatch::testing::brick;

namespace {

std::set<Node> node_set(const tmatch::DiCycle& c) { return {c.nodes.begin(), c.nodes.end()}; }

// Successor rule restated directly from the definition: black nodes follow
// their partner; white nodes continue in a straight line past their partner.
Node expected_successor(const tmatch::PerfectMatching& M, const Node& v) {
  const auto& d = M.dims();
  const Node u = M.partner(v);
  if (v.is_black()) return u;
  for (const Node& w : tmatch::neighbors(d, v)) {
    if (w == u) continue;
    const bool collinear = (u.row == v.row && w.row == v.row) || (u.col == v.col && w.col == v.col);
    if (collinear) return w;
  }
  ADD_FAILURE() << "no collinear successor";
  return v;
}

}  // namespace

TEST(Build, Examples) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto D = tmatch::build(brick(d));
  EXPECT_EQ(D.successor({0, 0}), (Node{0, 1}));
  EXPECT_EQ(D.successor({0, 1}), (Node{0, 2}));

  const auto V = tmatch::build(all_vertical(d, 0));
  EXPECT_EQ(V.successor({1, 0}), (Node{2, 0}));
  EXPECT_EQ(V.successor({0, 0}), (Node{1, 0}));
}

TEST(Build, MatchesDefinitionOnEveryMatching) {
  for (const auto& [m, n] : {std::pair{4, 4}, std::pair{4, 6}}) {
    const auto d = tmatch::TorusDims::make(m, n);
    tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
      const auto D = tmatch::build(M);
      for (int i = 0; i < d.node_count(); ++i) {
        const Node v = tmatch::node_at(d, i);
        ASSERT_EQ(D.successor(v), expected_successor(M, v));
        ASSERT_TRUE(tmatch::adjacent(d, v, D.successor(v)));
      }
    });
  }
}

TEST(Dicycles, BrickGivesRowCycles) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto cs = tmatch::dicycles(tmatch::build(brick(d)));
  ASSERT_EQ(cs.size(), 4U);
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(node_set(cs[r]), (std::set<Node>{{r, 0}, {r, 1}, {r, 2}, {r, 3}}));
    EXPECT_EQ(tmatch::cycle_type(d, cs[r]), CycleType::eo);
  }
}

TEST(Dicycles, AllVerticalGivesColumnCycles) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto cs = tmatch::dicycles(tmatch::build(all_vertical(d, 0)));
  ASSERT_EQ(cs.size(), 4U);
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(node_set(cs[c]), (std::set<Node>{{0, c}, {1, c}, {2, c}, {3, c}}));
    EXPECT_EQ(tmatch::cycle_type(d, cs[c]), CycleType::oe);
  }
}

TEST(Dicycles, FollowSuccessorsAndAreDisjoint) {
  const auto d = tmatch::TorusDims::make(4, 6);
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    const auto D = tmatch::build(M);
    const auto cs = tmatch::dicycles(D);
    ASSERT_FALSE(cs.empty());
    std::set<Node> seen;
    for (const auto& c : cs) {
      for (std::size_t k = 0; k < c.nodes.size(); ++k) {
        ASSERT_EQ(D.successor(c.nodes[k]), c.nodes[(k + 1) % c.nodes.size()]);
        ASSERT_NE(c.nodes[k].is_black(), c.nodes[(k + 1) % c.nodes.size()].is_black());
        ASSERT_TRUE(seen.insert(c.nodes[k]).second);
      }
      ASSERT_TRUE(tmatch::alternates(M, c));
      ASSERT_EQ(c.shadow.size(), c.nodes.size());
    }
  });
}

TEST(Dicycles, NeverOfTypeEeAndNeverContractible) {
  for (const auto& [m, n] : {std::pair{4, 4}, std::pair{4, 6}}) {
    const auto d = tmatch::TorusDims::make(m, n);
    tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
      for (const auto& c : tmatch::dicycles(tmatch::build(M))) {
        ASSERT_NE(tmatch::cycle_type(d, c), CycleType::ee) << tmatch::serialize(M);
        ASSERT_FALSE(tmatch::winding(d, c.as_grid_cycle()).contractible()) << tmatch::serialize(M);
      }
    });
  }
}

TEST(Dicycles, CornersShareOneParity) {
  const auto d = tmatch::TorusDims::make(4, 6);
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    for (const auto& c : tmatch::dicycles(tmatch::build(M))) {
      std::set<tmatch::NodeParity> classes;
      for (const auto& k : tmatch::corners(c.as_grid_cycle())) classes.insert(k.parity);
      ASSERT_LE(classes.size(), 1U);
      ASSERT_FALSE(classes.count(tmatch::NodeParity::Mixed));
    }
  });
}

TEST(CanonicalFirst, BrickPicksRowZero) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto c = tmatch::canonical_first(tmatch::build(brick(d)));
  EXPECT_EQ(node_set(c), (std::set<Node>{{0, 0}, {0, 1}, {0, 2}, {0, 3}}));
}

TEST(CanonicalFirst, IgnoresOrientation) {
  // phi reverses the canonical cycle; the selected node set must not move.
  const auto d = tmatch::TorusDims::make(4, 6);
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    const auto before = tmatch::canonical_first(tmatch::build(M));
    const auto after = tmatch::canonical_first(tmatch::build(tmatch::phi(M)));
    ASSERT_EQ(node_set(before), node_set(after));
    ASSERT_EQ(before.shadow, after.shadow);
  });
}

TEST(CanonicalFirst, OrdersBySortedNodeList) {
  tmatch::DiCycle row1, row3;
  for (int c = 0; c < 4; ++c) {
    row1.nodes.push_back({1, c});
    row3.nodes.push_back({3, c});
  }
  std::vector<tmatch::DiCycle> cs{row3, row1};
  EXPECT_EQ(tmatch::first_by_node_set(cs), 1U);
  std::reverse(row1.nodes.begin(), row1.nodes.end());
  std::vector<tmatch::DiCycle> reversed{row1, row3};
  EXPECT_EQ(tmatch::first_by_node_set(reversed), 0U);
  EXPECT_THROW(tmatch::first_by_node_set(std::vector<tmatch::DiCycle>{}), tmatch::invalid_input);
}

TEST(CycleType, RowAndColumn) {
  const auto d = tmatch::TorusDims::make(4, 6);
  EXPECT_EQ(tmatch::cycle_type(d, tmatch::canonical_first(tmatch::build(brick(d)))), CycleType::eo);
  EXPECT_EQ(tmatch::cycle_type(d, tmatch::canonical_first(tmatch::build(all_vertical(d, 1)))), CycleType::oe);
  EXPECT_STREQ(tmatch::to_string(CycleType::oo), "oo");
  EXPECT_EQ(tmatch::uppercase(CycleType::oe), tmatch::MatchType::OE);
  EXPECT_EQ(tmatch::lowercase(tmatch::MatchType::OO), CycleType::oo);
}

TEST(Dicycles, CoexistingCyclesShareType) {
  for (const auto& [m, n] : {std::pair{4, 4}, std::pair{4, 6}, std::pair{6, 6}}) {
    const auto d = tmatch::TorusDims::make(m, n);
    tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
      const auto cs = tmatch::dicycles(tmatch::build(M));
      for (const auto& c : cs) ASSERT_EQ(tmatch::cycle_type(d, c), tmatch::cycle_type(d, cs.front()));
    });
  }
}
