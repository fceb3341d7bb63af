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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. The CLI path is passed in at build time.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "support/oracles.hpp"
#include "torus_match/torus_match.hpp"

namespace tmatch = torus_match;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

const std::vector<std::pair<int, int>> kSmall{{4, 4}, {4, 6}};

const tmatch::CertificationReport& report_for(int m, int n) {
  static std::map<std::pair<int, int>, tmatch::CertificationReport> cache;
  auto it = cache.find({m, n});
  if (it == cache.end()) {
    tmatch::CertifyOptions opts;
    opts.threads = 4;
    it = cache.emplace(std::pair{m, n}, tmatch::certify(tmatch::TorusDims::make(m, n), opts)).first;
  }
  return it->second;
}

void require_checks(Outcome& o, const std::vector<std::string>& names) {
  for (const auto& [m, n] : kSmall) {
    const auto& r = report_for(m, n);
    for (const auto& name : names) {
      const auto* c = r.find(name);
      if (c == nullptr || c->checked != r.matchings || !c->pass()) {
        fail(o, name + " on " + std::to_string(m) + "x" + std::to_string(n));
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(report_for(4, 4).matchings + report_for(4, 6).matchings) +
               " matchings, zero failures";
  }
}

Outcome cancellation() {
  Outcome o;
  std::uint64_t cells = 0;
  for (const auto& [m, n] : {std::pair{4, 4}, std::pair{4, 6}, std::pair{6, 6}}) {
    const auto t = tmatch::count_table(tmatch::TorusDims::make(m, n), 4);
    for (const auto& [p, c] : t.cells) {
      ++cells;
      if (c[0] != tmatch::odd_count(c)) fail(o, "unbalanced cell " + tmatch::cell_to_json(p, c).dump());
    }
  }
  if (o.pass) o.detail = std::to_string(cells) + " profile cells balanced on 4x4, 4x6, 6x6";
  return o;
}

Outcome involution() {
  Outcome o;
  require_checks(o, {"involution", "profile_preservation"});
  return o;
}

Outcome type_mapping() {
  Outcome o;
  require_checks(o, {"type_mapping", "odd_cycle_type"});
  return o;
}

Outcome structure() {
  Outcome o;
  require_checks(o, {"out_degree_one", "dicycles_disjoint", "corner_parity", "no_ee_dicycle",
                     "non_contractible"});
  return o;
}

Outcome interiors() {
  Outcome o;
  const auto check = [&](const tmatch::TorusDims& d, const tmatch::GridCycle& c) {
    const auto inside = tmatch::disk_interior(d, c);
    if (inside.size() % 2 != 1 || tmatch::component_count(d, inside) != 1) {
      fail(o, "interior of size " + std::to_string(inside.size()));
    }
    if (inside != tmatch::testing::flood_fill_interior(d, c).interior) fail(o, "flood fill disagrees");
  };
  int rectangles = 0, random_cycles = 0;
  std::mt19937_64 rng(2026);
  for (const auto& [m, n] : {std::pair{6, 6}, std::pair{8, 8}}) {
    const auto d = tmatch::TorusDims::make(m, n);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) {
        if (tmatch::parity_of({r, c}) == tmatch::NodeParity::Mixed) continue;
        for (int h = 2; h < m; h += 2) {
          for (int w = 2; w < n; w += 2) {
            check(d, tmatch::rectangle_cycle(d, {r, c}, h, w));
            ++rectangles;
          }
        }
      }
    }
    while (random_cycles < (m == 6 ? 600 : 1200)) {
      if (auto c = tmatch::testing::random_same_parity_cycle(d, rng, 8)) {
        check(d, *c);
        ++random_cycles;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(rectangles) + " rectangles and " + std::to_string(random_cycles) +
               " random cycles";
  }
  return o;
}

Outcome pfaffians() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& [m, n] : kSmall) {
    const auto d = tmatch::TorusDims::make(m, n);
    std::uint64_t total = 0;
    tmatch::enumerate(d, [&](const tmatch::PerfectMatching&) { ++total; });
    const auto s = tmatch::summarize_pfaffians(d, total);
    if (s.vanishing.size() != 1) fail(o, "vanishing count " + std::to_string(s.vanishing.size()));
    if (s.count_signs.empty()) fail(o, "no combination reproduces " + std::to_string(total));
    for (int k = 0; k < 4; ++k) {
      const tmatch::Orientation orient{d, tmatch::kFlipOrder[k].first, tmatch::kFlipOrder[k].second};
      if (s.values[k] != tmatch::signed_matching_sum(d, orient)) fail(o, "brute-force sum differs");
    }
    detail << m << "x" << n << " Pf=(" << s.values[0] << "," << s.values[1] << "," << s.values[2]
           << "," << s.values[3] << ") count " << total << (m == 4 && n == 4 ? "; " : "");
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

Outcome embedding() {
  Outcome o;
  const auto d = tmatch::TorusDims::make(4, 4);
  int done = 0;
  tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
    try {
      const auto L = tmatch::embed_well_behaved(M);
      const auto& big = L.dims();
      const auto es = L.edges();
      if (big.rows() != 8 || big.cols() != 8 || !tmatch::is_perfect_matching(big, es) ||
          !tmatch::is_well_behaved(L) || tmatch::type_of(L) != tmatch::type_of(M) ||
          tmatch::cycle_type(big, tmatch::canonical_first(tmatch::build(L))) !=
              tmatch::cycle_type(d, tmatch::canonical_first(tmatch::build(M)))) {
        fail(o, tmatch::serialize(M));
      }
    } catch (const std::exception& e) {
      fail(o, e.what());
    }
    ++done;
  });
  if (o.pass) o.detail = std::to_string(done) + " matchings lifted to 8x8";
  return o;
}

std::pair<int, std::string> run(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
  Outcome o;
  const std::string cli = TORUS_MATCH_CLI;
  const auto a = run(cli + " certify --m 4 --n 4 --threads 1");
  const auto b = run(cli + " certify --m 4 --n 4 --threads 1");
  const auto c = run(cli + " certify --m 4 --n 4 --threads 8");
  if (a.first != 0 || b.first != 0 || c.first != 0) fail(o, "certify exited nonzero");
  if (a.second.empty()) fail(o, "no output");
  if (a.second != b.second) fail(o, "two runs differ");
  if (a.second != c.second) fail(o, "threads 1 and 8 differ");
  if (o.pass) o.detail = std::to_string(a.second.size()) + " identical bytes in three runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cancellation per profile", cancellation},
      {"involution and profile invariance", involution},
      {"type mapping", type_mapping},
      {"dicycle structure", structure},
      {"disk interiors", interiors},
      {"vanishing Pfaffian", pfaffians},
      {"embedding", embedding},
      {"determinism", determinism},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << k + 1 << " [" << criteria[k].first << "]: "
              << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
  }
  return all ? 0 : 1;
}
