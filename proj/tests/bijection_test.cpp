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

#include <map>
#include <set>
#include <string>

#include "support/oracles.hpp"
#include "torus_match/bijection.hpp"

namespace tmatch = torus_match;
using tmatch::Direction;
using tmatch::MatchType;
using tmatch::testing::all_matchings;
using tmatch::testing::all_vertical;
using tmatch::testing::brick;

namespace {

// Columns 0,1 paired across each row; the remaining columns vertical.
tmatch::PerfectMatching two_columns_then_vertical(const tmatch::TorusDims& d) {
  tmatch::EdgeList es;
  for (int r = 0; r < d.rows(); ++r) es.push_back({{r, 0}, Direction::Horizontal});
  for (int c = 2; c < d.cols(); ++c) {
    for (int r = 0; r < d.rows(); r += 2) es.push_back({{r, c}, Direction::Vertical});
  }
  return tmatch::PerfectMatching::from_edges(d, es);
}

}  // namespace

TEST(Phi, BrickShiftsRowZero) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto image = tmatch::phi(brick(d));
  EXPECT_EQ(image.partner({0, 1}), (tmatch::Node{0, 2}));
  EXPECT_EQ(image.partner({0, 3}), (tmatch::Node{0, 0}));
  for (int r = 1; r < 4; ++r) EXPECT_EQ(image.partner({r, 0}), (tmatch::Node{r, 1}));
  EXPECT_EQ(tmatch::type_of(image), MatchType::EO);
  EXPECT_EQ(tmatch::phi(image), brick(d));
}

TEST(Phi, FastAndVerifiedAgree) {
  const auto d = tmatch::TorusDims::make(4, 6);
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    ASSERT_EQ(tmatch::phi(M, tmatch::PhiMode::Fast), tmatch::phi(M, tmatch::PhiMode::Verified));
  });
}

TEST(Phi, InvolutionOnFourByFour) {
  const auto d = tmatch::TorusDims::make(4, 4);
  for (const auto& M : all_matchings(d)) {
    const auto once = tmatch::phi(M);
    ASSERT_NE(once, M);
    ASSERT_EQ(tmatch::phi(once), M) << tmatch::serialize(M);
  }
}

TEST(Phi, PreservesProfileAndSwapsParity) {
  const auto d = tmatch::TorusDims::make(4, 6);
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    const auto image = tmatch::phi(M);
    ASSERT_EQ(tmatch::profile(image), tmatch::profile(M));
    const bool even_before = tmatch::type_of(M) == MatchType::EE;
    const bool even_after = tmatch::type_of(image) == MatchType::EE;
    ASSERT_NE(even_before, even_after) << tmatch::serialize(M);
  });
}

TEST(Phi, ParityBookkeeping) {
  // Layer counts of M and phi(M) differ by the layer counts of C_M, mod 2.
  for (const auto& [m, n] : {std::pair{4, 4}, std::pair{4, 6}}) {
    const auto d = tmatch::TorusDims::make(m, n);
    tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
      const auto cm = tmatch::canonical_first(tmatch::build(M));
      const auto a = M.edges();
      const auto b = tmatch::phi(M).edges();
      ASSERT_EQ((tmatch::count_in_layer_a(d, a) + tmatch::count_in_layer_a(d, b)) % 2,
                tmatch::count_in_layer_a(d, cm.shadow) % 2);
      ASSERT_EQ((tmatch::count_in_layer_b(d, a) + tmatch::count_in_layer_b(d, b)) % 2,
                tmatch::count_in_layer_b(d, cm.shadow) % 2);
    });
  }
}

TEST(Phi, EvenMatchingsMapToTheirCycleType) {
  const auto d = tmatch::TorusDims::make(4, 6);
  std::map<MatchType, int> seen;
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    if (tmatch::type_of(M) != MatchType::EE) return;
    const auto ct = tmatch::cycle_type(d, tmatch::canonical_first(tmatch::build(M)));
    ASSERT_EQ(tmatch::type_of(tmatch::phi(M)), tmatch::uppercase(ct));
    ++seen[tmatch::type_of(tmatch::phi(M))];
  });
  EXPECT_EQ(seen[MatchType::EO], 304);
  EXPECT_EQ(seen[MatchType::OE], 1154);
  EXPECT_EQ(seen[MatchType::OO], 96);
}

TEST(WellBehaved, Examples) {
  const auto d = tmatch::TorusDims::make(6, 6);
  EXPECT_TRUE(tmatch::is_well_behaved(two_columns_then_vertical(d)));
  EXPECT_FALSE(tmatch::is_well_behaved(brick(d)));
  EXPECT_FALSE(tmatch::is_well_behaved(all_vertical(d, 0)));
}

TEST(Embed, BrickIntoEightByEight) {
  const auto d = tmatch::TorusDims::make(4, 4);
  const auto lifted = tmatch::embed_well_behaved(brick(d));
  EXPECT_EQ(lifted.dims().rows(), 8);
  EXPECT_EQ(lifted.dims().cols(), 8);
  EXPECT_EQ(tmatch::type_of(lifted), MatchType::EE);
  EXPECT_EQ(tmatch::cycle_type(lifted.dims(), tmatch::canonical_first(tmatch::build(lifted))), tmatch::CycleType::eo);
  EXPECT_TRUE(tmatch::is_well_behaved(lifted));
}

TEST(Embed, KeepsLayerCountsOnFourByFour) {
  const auto d = tmatch::TorusDims::make(4, 4);
  for (const auto& M : all_matchings(d)) {
    const auto lifted = tmatch::embed_well_behaved(M);
    const auto& big = lifted.dims();
    ASSERT_EQ(tmatch::count_in_layer_a(big, lifted.edges()), tmatch::count_in_layer_a(d, M.edges()));
    ASSERT_EQ(tmatch::count_in_layer_b(big, lifted.edges()), tmatch::count_in_layer_b(d, M.edges()));
  }
}

TEST(Embed, WellBehavedAcrossFourBySix) {
  const auto d = tmatch::TorusDims::make(4, 6);
  std::set<std::string> images;
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    const auto lifted = tmatch::embed_well_behaved(M);
    ASSERT_TRUE(tmatch::is_well_behaved(lifted));
    ASSERT_EQ(tmatch::type_of(lifted), tmatch::type_of(M));
    ASSERT_TRUE(images.insert(tmatch::serialize(lifted)).second);  // injective
  });
}
