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

// torus_match: command-line driver.
//
// Exit codes: 0 ok, 1 certify found a failing check, 2 usage error (bad
// flags, odd or undersized dims, guard refusal), 3 unreadable or malformed
// matching file, 4 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "torus_match/torus_match.hpp"

namespace tmatch = torus_match;
using nlohmann::ordered_json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBadFile = 3;
constexpr int kExitInternal = 4;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int guard_from_env() {
  const char* raw = std::getenv("TORUS_MATCH_GUARD");
  if (raw == nullptr || *raw == '\0') return tmatch::kDefaultGuard;
  try {
    std::size_t used = 0;
    const int g = std::stoi(raw, &used);
    if (used != std::string(raw).size() || g < 16) throw std::invalid_argument(raw);
    return g;
  } catch (const std::exception&) {
    throw usage_error(std::string("TORUS_MATCH_GUARD must be an integer >= 16, got '") + raw + "'");
  }
}

tmatch::TorusDims dims_or_usage(int m, int n) {
  try {
    return tmatch::TorusDims::make(m, n);
  } catch (const tmatch::invalid_input& e) {
    throw usage_error(e.what());
  }
}

tmatch::PerfectMatching read_matching(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tmatch::parse_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return tmatch::deserialize(buf.str());
}

ordered_json big_to_json(const tmatch::BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
    return x.convert_to<long long>();
  }
  return x.str();
}

ordered_json cycle_to_json(const tmatch::TorusDims& d, const tmatch::DiCycle& c) {
  ordered_json j;
  auto nodes = ordered_json::array();
  for (const auto& v : c.nodes) nodes.push_back({v.row, v.col});
  j["nodes"] = std::move(nodes);
  j["type"] = tmatch::to_string(tmatch::cycle_type(d, c));
  const auto w = tmatch::winding(d, c.as_grid_cycle());
  j["winding"] = {w.vertical, w.horizontal};
  return j;
}

int run_enum(int m, int n, bool by_profile, bool csv, int threads) {
  const auto d = dims_or_usage(m, n);
  const auto table = tmatch::count_table(d, threads, guard_from_env());
  if (csv) {
    std::cout << tmatch::to_csv(table);
  } else {
    std::cout << tmatch::to_json(table, by_profile).dump(2) << '\n';
  }
  return 0;
}

int run_phi(const std::string& path, bool trace) {
  const auto M = read_matching(path);
  const auto image = tmatch::phi(M);
  if (!trace) {
    std::cout << tmatch::serialize(image) << '\n';
    return 0;
  }
  // The trace rides along as an extra key, so the output still reads back as
  // a matching file.
  const auto& d = M.dims();
  const auto D = tmatch::build(M);
  const auto cycles = tmatch::dicycles(D);
  const auto first = tmatch::first_by_node_set(cycles);
  ordered_json t;
  t["input_type"] = tmatch::to_string(tmatch::type_of(M));
  t["output_type"] = tmatch::to_string(tmatch::type_of(image));
  t["canonical"] = first;
  auto cs = ordered_json::array();
  for (const auto& c : cycles) cs.push_back(cycle_to_json(d, c));
  t["dicycles"] = std::move(cs);
  auto out = tmatch::to_json(image);
  out["trace"] = std::move(t);
  std::cout << out.dump() << '\n';
  return 0;
}

int run_certify(int m, int n, int threads, std::optional<std::uint64_t> samples,
                std::uint64_t seed, bool timing) {
  const auto d = dims_or_usage(m, n);
  tmatch::CertifyOptions opts;
  opts.threads = threads;
  opts.guard = guard_from_env();
  opts.samples = samples;
  opts.seed = seed;
  const auto report = tmatch::certify(d, opts);
  std::cout << tmatch::to_json(report, timing).dump(2) << '\n';
  if (!report.all_pass()) {
    for (const auto& c : report.checks) {
      if (!c.pass()) std::cerr << "FAIL " << c.name << ": " << c.failures << " of " << c.checked << '\n';
    }
    return kExitCheckFailed;
  }
  return 0;
}

int run_pfaffian(int m, int n) {
  const auto d = dims_or_usage(m, n);
  ordered_json j;
  j["m"] = m;
  j["n"] = n;
  j["order"] = {"theta=0,tau=0", "theta=0,tau=1", "theta=1,tau=0", "theta=1,tau=1"};
  if (d.node_count() <= 64) {
    // CompletionCounter gives the count without enumerating every matching.
    const auto s = tmatch::summarize_pfaffians(d, tmatch::CompletionCounter(d).total());
    auto vals = ordered_json::array();
    for (const auto& v : s.values) vals.push_back(big_to_json(v));
    j["pfaffians"] = std::move(vals);
    j["vanishing"] = s.vanishing;
    j["count"] = s.total;
    j["count_signs"] = s.count_signs;
    if (s.vanishing.size() == 1 && d.node_count() <= guard_from_env()) {
      // Sign each matching takes in the vanishing Pfaffian, split by type.
      const auto [theta, tau] = tmatch::kFlipOrder[s.vanishing[0]];
      const tmatch::Orientation o{d, theta, tau};
      std::set<int> even, odd;
      tmatch::enumerate(d, [&](const tmatch::PerfectMatching& M) {
        (tmatch::type_of(M) == tmatch::MatchType::EE ? even : odd).insert(tmatch::matching_sign(M, o));
      });
      j["vanishing_signs"] = {{"EE", even}, {"odd", odd}};
    }
  } else {
    const auto values = tmatch::kasteleyn_pfaffians(d);
    auto vals = ordered_json::array();
    auto vanishing = ordered_json::array();
    for (int k = 0; k < 4; ++k) {
      vals.push_back(big_to_json(values[k]));
      if (values[k] == 0) vanishing.push_back(k);
    }
    j["pfaffians"] = std::move(vals);
    j["vanishing"] = std::move(vanishing);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_embed(const std::string& path) {
  const auto M = read_matching(path);
  auto out = tmatch::to_json(tmatch::embed_well_behaved(M));
  out["embedding"] = {{"shift", {2, 2}},
                      {"layer_a", "edge in column j lifts to column j+2"},
                      {"layer_b", "edge in row i lifts to row i+2"}};
  std::cout << out.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect matchings of the torus grid: counts, the even/odd involution, Pfaffians."};
  app.require_subcommand(1);

  int m = 0, n = 0, threads = 1;
  bool by_profile = false, as_json = false, as_csv = false, trace = false, timing = false;
  std::string input;
  std::uint64_t samples = 0, seed = 1;

  const auto add_dims = [&](CLI::App* sub) {
    sub->add_option("--m", m, "rows (even, >= 4)")->required();
    sub->add_option("--n", n, "columns (even, >= 4)")->required();
  };

  auto* en = app.add_subcommand("enum", "count matchings by type, optionally per profile");
  add_dims(en);
  en->add_flag("--by-profile", by_profile, "include one cell per profile");
  auto* json_flag = en->add_flag("--json", as_json, "JSON output (default)");
  en->add_flag("--csv", as_csv, "CSV per-profile table")->excludes(json_flag);
  en->add_option("--threads", threads)->check(CLI::PositiveNumber);

  auto* ph = app.add_subcommand("phi", "apply the involution to a matching file");
  ph->add_option("--input", input, "matching file")->required();
  ph->add_flag("--trace", trace, "also report the dicycles and types");

  auto* ce = app.add_subcommand("certify", "run every check over all matchings");
  add_dims(ce);
  ce->add_option("--threads", threads)->check(CLI::PositiveNumber);
  auto* samples_opt =
      ce->add_option("--samples", samples, "past the guard, check this many random matchings");
  ce->add_option("--seed", seed, "sampling seed")->needs(samples_opt);
  ce->add_flag("--timing", timing, "include per-check seconds (output no longer reproducible)");

  auto* pf = app.add_subcommand("pfaffian", "four Kasteleyn Pfaffians and the vanishing one");
  add_dims(pf);

  auto* em = app.add_subcommand("embed", "lift a matching to the torus four rows and columns larger");
  em->add_option("--input", input, "matching file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (en->parsed()) return run_enum(m, n, by_profile, as_csv, threads);
    if (ph->parsed()) return run_phi(input, trace);
    if (ce->parsed()) {
      std::optional<std::uint64_t> s;
      if (samples_opt->count() > 0) s = samples;
      return run_certify(m, n, threads, s, seed, timing);
    }
    if (pf->parsed()) return run_pfaffian(m, n);
    if (em->parsed()) return run_embed(input);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tmatch::guard_exceeded& e) {
    std::cerr << "error: " << e.what() << " (set TORUS_MATCH_GUARD or pass --samples)\n";
    return kExitUsage;
  } catch (const tmatch::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFile;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
