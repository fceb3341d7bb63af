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
 * @file harness.hpp
 * @brief Exhaustive verification: per-profile count tables and the
 *        certification suite run over every matching of a small torus.
 */

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "torus_match/bijection.hpp"
#include "torus_match/errors.hpp"
#include "torus_match/matching.hpp"
#include "torus_match/torus_grid.hpp"
#include "torus_match/transfer_digraph.hpp"

namespace torus_match {

/// Default ceiling on m*n for exhaustive work.
inline constexpr int kDefaultGuard = 48;

inline void require_desk_scale(const TorusDims& d, int guard) {
  if (d.node_count() > guard) {
    throw guard_exceeded("torus " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                         " exceeds the exhaustive guard of " + std::to_string(guard) + " nodes");
  }
}

namespace detail {

/// Runs `visit(acc, M)` over every matching, splitting the enumeration by the
/// first node's four choices across up to `threads` workers. Returns one
/// accumulator per branch, in branch order, so merging is deterministic.
template <typename Acc, typename Visit>
std::array<Acc, kBranchCount> over_branches(const TorusDims& d, int threads, const Acc& init,
                                            Visit visit) {
  std::array<Acc, kBranchCount> accs{init, init, init, init};
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int b = next++; b < kBranchCount; b = next++) {
      enumerate(d, [&](const PerfectMatching& M) { visit(accs[b], M); }, b);
    }
  };
  const int workers = std::clamp(threads, 1, kBranchCount);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return accs;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Count tables

using TypeCounts = std::array<std::uint64_t, 4>;  // indexed by MatchType

inline std::uint64_t odd_count(const TypeCounts& c) { return c[1] + c[2] + c[3]; }

struct CountTable {
  TorusDims dims;
  std::map<Profile, TypeCounts> cells;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [p, c] : cells) t += c[0] + odd_count(c);
    return t;
  }

  TypeCounts type_totals() const {
    TypeCounts t{};
    for (const auto& [p, c] : cells) {
      for (int k = 0; k < 4; ++k) t[k] += c[k];
    }
    return t;
  }
};

/// Exact per-profile, per-type counts. Throws guard_exceeded past `guard`.
inline CountTable count_table(const TorusDims& d, int threads = 1, int guard = kDefaultGuard) {
  require_desk_scale(d, guard);
  using Cells = std::map<Profile, TypeCounts>;
  const auto parts = detail::over_branches<Cells>(d, threads, Cells{},
                                                  [](Cells& cells, const PerfectMatching& M) {
                                                    ++cells[profile(M)][static_cast<int>(type_of(M))];
                                                  });
  CountTable table{d, {}};
  for (const auto& part : parts) {
    for (const auto& [p, c] : part) {
      auto& cell = table.cells[p];
      for (int k = 0; k < 4; ++k) cell[k] += c[k];
    }
  }
  return table;
}

inline nlohmann::ordered_json cell_to_json(const Profile& p, const TypeCounts& c) {
  nlohmann::ordered_json j;
  j["h"] = p.h;
  j["v"] = p.v;
  j["EE"] = c[0];
  j["EO"] = c[1];
  j["OE"] = c[2];
  j["OO"] = c[3];
  j["positive"] = p.positive();
  return j;
}

inline nlohmann::ordered_json to_json(const CountTable& t, bool by_profile) {
  nlohmann::ordered_json j;
  j["m"] = t.dims.rows();
  j["n"] = t.dims.cols();
  j["total"] = t.total();
  const auto tt = t.type_totals();
  j["EE"] = tt[0];
  j["EO"] = tt[1];
  j["OE"] = tt[2];
  j["OO"] = tt[3];
  j["profiles"] = t.cells.size();
  if (by_profile) {
    auto cells = nlohmann::ordered_json::array();
    for (const auto& [p, c] : t.cells) cells.push_back(cell_to_json(p, c));
    j["cells"] = std::move(cells);
  }
  return j;
}

/// Reads the by-profile JSON written by `to_json(CountTable, true)`.
inline CountTable count_table_from_json(const nlohmann::json& j) {
  try {
    CountTable t{TorusDims::make(j.at("m").get<int>(), j.at("n").get<int>()), {}};
    for (const auto& cell : j.at("cells")) {
      Profile p{cell.at("h").get<std::vector<int>>(), cell.at("v").get<std::vector<int>>()};
      t.cells[p] = {cell.at("EE").get<std::uint64_t>(), cell.at("EO").get<std::uint64_t>(),
                    cell.at("OE").get<std::uint64_t>(), cell.at("OO").get<std::uint64_t>()};
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("malformed count table: ") + e.what());
  } catch (const invalid_input& e) {
    throw parse_error(e.what());
  }
}

/// Columns: h-vector, v-vector, EE, EO, OE, OO. Vector entries are separated
/// by spaces.
inline std::string to_csv(const CountTable& t) {
  const auto join = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? " " : "") + std::to_string(xs[k]);
    return s;
  };
  std::ostringstream out;
  out << "h,v,EE,EO,OE,OO\n";
  for (const auto& [p, c] : t.cells) {
    out << join(p.h) << ',' << join(p.v) << ',' << c[0] << ',' << c[1] << ',' << c[2] << ','
        << c[3] << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Certification

/// The map under test, as a raw edge set so that a broken implementation can
/// produce something that is not a matching at all.
using PhiFn = std::function<EdgeList(const PerfectMatching&)>;

inline PhiFn default_phi() { return [](const PerfectMatching& M) { return phi_edges(M); }; }

/// Per-matching checks, in report order. "cancellation" is evaluated on the
/// whole count table and is appended after these.
inline const std::vector<std::string>& matching_check_names() {
  static const std::vector<std::string> names{
      "out_degree_one",     "dicycles_disjoint",    "corner_parity",
      "black_path_parity",  "no_ee_dicycle",        "non_contractible",
      "equal_type",         "shadow_alternation",   "involution",
      "profile_preservation", "type_mapping",       "parity_bookkeeping",
      "odd_cycle_type",     "embedding"};
  return names;
}

namespace detail {

/// Lazily computed facts about one matching, shared by the checks.
class MatchingFacts {
 public:
  MatchingFacts(const PerfectMatching& M, const PhiFn& phi) : M_(M), phi_(phi) {}

  const PerfectMatching& matching() const { return M_; }
  const PhiFn& phi() const { return phi_; }
  const TorusDims& dims() const { return M_.dims(); }

  const TransferDigraph& digraph() {
    if (!digraph_) digraph_.emplace(build(M_));
    return *digraph_;
  }

  const std::vector<DiCycle>& cycles() {
    if (!cycles_) cycles_ = dicycles(digraph());
    return *cycles_;
  }

  const DiCycle& canonical() {
    if (!canonical_) {
      const auto& cs = cycles();
      canonical_ = cs[first_by_node_set(cs)];
    }
    return *canonical_;
  }

  const EdgeList& image_edges() {
    if (!image_edges_) {
      auto es = phi_(M_);
      std::sort(es.begin(), es.end());
      image_edges_ = std::move(es);
    }
    return *image_edges_;
  }

  /// phi(M) if it is a perfect matching.
  const std::optional<PerfectMatching>& image() {
    if (!image_checked_) {
      image_checked_ = true;
      const auto& es = image_edges();
      const bool in_range_edges = std::all_of(es.begin(), es.end(), [&](const GridEdge& e) {
        return in_range(dims(), e.origin);
      });
      const bool distinct = std::adjacent_find(es.begin(), es.end()) == es.end();
      if (in_range_edges && distinct && is_perfect_matching(dims(), es)) {
        image_.emplace(PerfectMatching::from_edges(dims(), es));
      }
    }
    return image_;
  }

 private:
  const PerfectMatching& M_;
  const PhiFn& phi_;
  std::optional<TransferDigraph> digraph_;
  std::optional<std::vector<DiCycle>> cycles_;
  std::optional<DiCycle> canonical_;
  std::optional<EdgeList> image_edges_;
  bool image_checked_ = false;
  std::optional<PerfectMatching> image_;
};

inline bool run_check(const std::string& name, MatchingFacts& f) {
  const auto& d = f.dims();
  const auto& M = f.matching();

  if (name == "out_degree_one") {
    const auto succ = f.digraph().successors();
    if (succ.size() != static_cast<std::size_t>(d.node_count())) return false;
    for (int v = 0; v < d.node_count(); ++v) {
      if (succ[v] < 0 || succ[v] >= d.node_count()) return false;
      if (!adjacent(d, node_at(d, v), node_at(d, succ[v]))) return false;
    }
    return true;
  }
  if (name == "dicycles_disjoint") {
    std::set<Node> seen;
    for (const auto& c : f.cycles()) {
      for (const auto& v : c.nodes) {
        if (!seen.insert(v).second) return false;
      }
    }
    return !f.cycles().empty();
  }
  if (name == "corner_parity") {
    for (const auto& c : f.cycles()) {
      std::set<NodeParity> classes;
      for (const auto& corner : corners(c.as_grid_cycle())) classes.insert(corner.parity);
      if (classes.size() > 1 || classes.count(NodeParity::Mixed)) return false;
    }
    return true;
  }
  if (name == "black_path_parity") {
    // The next black node on a path is two steps ahead; chaining these steps
    // covers every pair of black nodes sharing a path.
    const auto succ = f.digraph().successors();
    for (int v = 0; v < d.node_count(); ++v) {
      const Node b = node_at(d, v);
      if (!b.is_black()) continue;
      if (parity_of(b) != parity_of(node_at(d, succ[succ[v]]))) return false;
    }
    return true;
  }
  if (name == "no_ee_dicycle") {
    return std::none_of(f.cycles().begin(), f.cycles().end(),
                        [&](const DiCycle& c) { return cycle_type(d, c) == CycleType::ee; });
  }
  if (name == "non_contractible") {
    return std::none_of(f.cycles().begin(), f.cycles().end(), [&](const DiCycle& c) {
      return winding(d, c.as_grid_cycle()).contractible();
    });
  }
  if (name == "equal_type") {
    const auto& cs = f.cycles();
    return std::all_of(cs.begin(), cs.end(), [&](const DiCycle& c) {
      return cycle_type(d, c) == cycle_type(d, cs.front());
    });
  }
  if (name == "shadow_alternation") return alternates(M, f.canonical());
  if (name == "involution") {
    const auto& image = f.image();
    if (!image) return false;
    MatchingFacts back(*image, f.phi());
    const auto& again = back.image();
    return again && *again == M;
  }
  if (name == "profile_preservation") {
    return f.image() && profile(*f.image()) == profile(M);
  }
  if (name == "type_mapping") {
    if (!f.image()) return false;
    const MatchType before = type_of(M);
    const MatchType after = type_of(*f.image());
    if ((before == MatchType::EE) == (after == MatchType::EE)) return false;
    return before != MatchType::EE || after == uppercase(cycle_type(d, f.canonical()));
  }
  if (name == "parity_bookkeeping") {
    const auto own = M.edges();
    const auto& img = f.image_edges();
    const auto& shadow = f.canonical().shadow;
    const bool a_ok = (count_in_layer_a(d, img) - count_in_layer_a(d, own) -
                       count_in_layer_a(d, shadow)) % 2 == 0;
    const bool b_ok = (count_in_layer_b(d, img) - count_in_layer_b(d, own) -
                       count_in_layer_b(d, shadow)) % 2 == 0;
    return a_ok && b_ok;
  }
  if (name == "odd_cycle_type") {
    const MatchType t = type_of(M);
    return t == MatchType::EE || cycle_type(d, f.canonical()) == lowercase(t);
  }
  if (name == "embedding") {
    try {
      const auto lifted = embed_well_behaved(M);
      return lifted.dims().rows() == d.rows() + 4 && lifted.dims().cols() == d.cols() + 4 &&
             is_well_behaved(lifted) && type_of(lifted) == type_of(M);
    } catch (const internal_error&) {
      return false;
    }
  }
  throw invalid_input("unknown check: " + name);
}

}  // namespace detail

/// Re-runs one per-matching check on a single matching; true means it passes.
inline bool replay_check(const std::string& name, const PerfectMatching& M,
                         const PhiFn& phi = default_phi()) {
  detail::MatchingFacts facts(M, phi);
  return detail::run_check(name, facts);
}

struct CheckResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  /// Smallest few failing inputs, sorted: canonical matching text for
  /// per-matching checks, a profile cell for "cancellation".
  std::vector<std::string> counterexamples;
  double seconds = 0.0;

  bool pass() const { return failures == 0; }
};

struct CertificationReport {
  TorusDims dims;
  std::string mode;  // "exhaustive" or "sampled"
  std::uint64_t matchings = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::uint64_t profiles = 0;
  std::uint64_t positive_profiles = 0;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct CertifyOptions {
  int threads = 1;
  int guard = kDefaultGuard;
  /// Past the guard, check this many uniformly random matchings instead.
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  PhiFn phi = default_phi();
};

inline constexpr std::size_t kMaxCounterexamples = 3;

namespace detail {

struct CheckTally {
  std::vector<CheckResult> results;

  explicit CheckTally(const std::vector<std::string>& names) {
    for (const auto& n : names) results.push_back({n, 0, 0, {}, 0.0});
  }

  void record(std::size_t k, bool ok, const PerfectMatching& M, double secs) {
    auto& r = results[k];
    ++r.checked;
    r.seconds += secs;
    if (ok) return;
    ++r.failures;
    add_counterexample(r, serialize(M));
  }

  static void add_counterexample(CheckResult& r, std::string text) {
    auto& ce = r.counterexamples;
    ce.insert(std::upper_bound(ce.begin(), ce.end(), text), std::move(text));
    ce.erase(std::unique(ce.begin(), ce.end()), ce.end());
    if (ce.size() > kMaxCounterexamples) ce.resize(kMaxCounterexamples);
  }

  void merge(const CheckTally& other) {
    for (std::size_t k = 0; k < results.size(); ++k) {
      auto& r = results[k];
      const auto& o = other.results[k];
      r.checked += o.checked;
      r.failures += o.failures;
      r.seconds += o.seconds;
      for (const auto& t : o.counterexamples) add_counterexample(r, t);
    }
  }

  void check_all(const PerfectMatching& M, const PhiFn& phi) {
    MatchingFacts facts(M, phi);
    const auto& names = matching_check_names();
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const bool ok = run_check(names[k], facts);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      record(k, ok, M, dt.count());
    }
  }
};

}  // namespace detail

/// Runs every check over all matchings of `d` (or over random samples when
/// `d` is past the guard and `opts.samples` is set). Failures are reported,
/// never thrown. Throws guard_exceeded past the guard without samples.
inline CertificationReport certify(const TorusDims& d, const CertifyOptions& opts = {}) {
  CertificationReport report{d, "exhaustive", 0, 0, {}, 0, 0};
  const auto& names = matching_check_names();
  detail::CheckTally tally(names);

  if (d.node_count() <= opts.guard) {
    struct Acc {
      detail::CheckTally tally;
      std::map<Profile, TypeCounts> cells;
    };
    const Acc init{detail::CheckTally(names), {}};
    const auto parts = detail::over_branches<Acc>(d, opts.threads, init,
                                                  [&](Acc& acc, const PerfectMatching& M) {
                                                    acc.tally.check_all(M, opts.phi);
                                                    ++acc.cells[profile(M)][static_cast<int>(type_of(M))];
                                                  });
    std::map<Profile, TypeCounts> cells;
    for (const auto& part : parts) {
      tally.merge(part.tally);
      for (const auto& [p, c] : part.cells) {
        for (int k = 0; k < 4; ++k) cells[p][k] += c[k];
      }
    }

    CheckResult cancel{"cancellation", 0, 0, {}, 0.0};
    for (const auto& [p, c] : cells) {
      ++cancel.checked;
      ++report.profiles;
      report.positive_profiles += p.positive();
      report.matchings += c[0] + odd_count(c);
      if (c[0] != odd_count(c)) {
        ++cancel.failures;
        detail::CheckTally::add_counterexample(cancel, cell_to_json(p, c).dump());
      }
    }
    report.checks = tally.results;
    report.checks.push_back(std::move(cancel));
    return report;
  }

  if (!opts.samples) require_desk_scale(d, opts.guard);
  report.mode = "sampled";
  report.seed = opts.seed;
  CompletionCounter counter(d);
  std::mt19937_64 rng(opts.seed);
  std::vector<PerfectMatching> drawn;
  drawn.reserve(*opts.samples);
  for (std::uint64_t s = 0; s < *opts.samples; ++s) drawn.push_back(counter.sample(rng));
  report.matchings = drawn.size();

  const int workers = std::max(1, opts.threads);
  std::vector<detail::CheckTally> parts(workers, detail::CheckTally(names));
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < drawn.size(); k += workers) parts[t].check_all(drawn[k], opts.phi);
      });
    }
  }
  for (const auto& part : parts) tally.merge(part);
  report.checks = tally.results;
  return report;
}

inline nlohmann::ordered_json to_json(const CertificationReport& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["m"] = r.dims.rows();
  j["n"] = r.dims.cols();
  j["mode"] = r.mode;
  if (r.mode == "sampled") j["seed"] = r.seed;
  j["matchings"] = r.matchings;
  j["layers"] = {{"A", "vertical edges joining row m-1 to row 0"},
                 {"B", "horizontal edges joining column n-1 to column 0"}};
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass();
    cj["checked"] = c.checked;
    cj["failures"] = c.failures;
    cj["counterexamples"] = c.counterexamples;
    if (include_timing) cj["seconds"] = c.seconds;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  if (r.mode == "exhaustive") {
    j["profiles"] = r.profiles;
    j["positive_profiles"] = r.positive_profiles;
  }
  j["pass"] = r.all_pass();
  return j;
}

}  // namespace torus_match
