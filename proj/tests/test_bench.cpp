// Copyright 2026 The cnotsynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cnotsynth/bench.hpp"

using namespace cnotsynth;

namespace {

BenchRecord rec(const std::string& method, Setting s, int n, int id, int count,
                bool fallback = false) {
  BenchRecord r;
  r.method = method;
  r.setting = s;
  r.n = n;
  r.matrix_id = id;
  r.cnot_count = count;
  r.block_count = count;
  r.verified = true;
  r.fallback = fallback;
  return r;
}

}  // namespace

TEST_CASE("pmh-only benchmark produces verified records") {
  BenchConfig cfg;
  cfg.sizes = {3};
  cfg.settings = {Setting::rare};
  cfg.suite_size = 100;
  cfg.methods = {"pmh"};
  cfg.seed = 12;
  std::vector<BenchRecord> records = run_benchmark(cfg, nullptr);
  REQUIRE(records.size() == 100);
  for (const BenchRecord& r : records) {
    CHECK(r.verified);
    CHECK(r.method == "pmh");
    CHECK(r.prefix_count == 0);
  }
}

TEST_CASE("identical config and seed give identical records") {
  BenchConfig cfg;
  cfg.sizes = {4, 6};
  cfg.settings = {Setting::rare, Setting::medium};
  cfg.suite_size = 10;
  cfg.methods = {"pmh"};
  cfg.seed = 3;
  auto a = run_benchmark(cfg, nullptr);
  auto b = run_benchmark(cfg, nullptr);
  CHECK(records_to_csv(a) == records_to_csv(b));

  // parallel processing does not change the bytes
  cfg.jobs = 2;
  auto c = run_benchmark(cfg, nullptr);
  CHECK(records_to_csv(a) == records_to_csv(c));
}

TEST_CASE("exact method records optimal counts") {
  BenchConfig cfg;
  cfg.sizes = {3};
  cfg.settings = {Setting::rare};
  cfg.suite_size = 20;
  cfg.methods = {"pmh", "exact"};
  cfg.seed = 4;
  auto records = run_benchmark(cfg, nullptr);
  // per matrix: exact <= pmh
  for (int id = 0; id < 20; ++id) {
    int pmh_count = -1, exact_count = -1;
    for (const auto& r : records) {
      if (r.matrix_id != id) continue;
      if (r.method == "pmh") pmh_count = r.cnot_count;
      if (r.method == "exact") exact_count = r.cnot_count;
    }
    REQUIRE(pmh_count >= 0);
    REQUIRE(exact_count >= 0);
    CHECK(exact_count <= pmh_count);
  }
  BenchConfig bad = cfg;
  bad.sizes = {6};
  CHECK_THROWS_AS(run_benchmark(bad, nullptr), std::invalid_argument);
}

TEST_CASE("summarize computes sample statistics") {
  std::vector<BenchRecord> records;
  for (int i = 0; i < 100; ++i)
    records.push_back(rec("pmh", Setting::rare, 5, i, 7));
  auto rows = summarize(records);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean == doctest::Approx(7.0));
  CHECK(rows[0].stddev == doctest::Approx(0.0));
  CHECK(rows[0].count == 100);

  std::vector<BenchRecord> two = {rec("pmh", Setting::rare, 5, 0, 1),
                                  rec("pmh", Setting::rare, 5, 1, 3)};
  auto rows2 = summarize(two);
  CHECK(rows2[0].mean == doctest::Approx(2.0));
  CHECK(rows2[0].stddev == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
  BenchRecord bad = rec("pmh", Setting::rare, 5, 0, 1);
  bad.verified = false;
  CHECK_THROWS_AS(summarize({bad}), std::invalid_argument);
}

TEST_CASE("summary table renders RL before PMH in each setting") {
  std::vector<BenchRecord> records = {
      rec("pmh", Setting::rare, 5, 0, 4), rec("rl", Setting::rare, 5, 0, 3),
      rec("pmh", Setting::medium, 5, 0, 9), rec("rl", Setting::medium, 5, 0, 7)};
  std::string table = render_summary_table(summarize(records));
  auto rl_pos = table.find("rare:rl");
  auto pmh_pos = table.find("rare:pmh");
  REQUIRE(rl_pos != std::string::npos);
  REQUIRE(pmh_pos != std::string::npos);
  CHECK(rl_pos < pmh_pos);
  auto med_rl = table.find("medium:rl");
  REQUIRE(med_rl != std::string::npos);
  CHECK(pmh_pos < med_rl);
}

TEST_CASE("ablation difference table") {
  std::vector<BenchRecord> records;
  // equal outputs -> zero difference
  for (int i = 0; i < 10; ++i) {
    records.push_back(rec("rl", Setting::rare, 9, i, 5));
    records.push_back(rec("pmh-star", Setting::rare, 9, i, 5));
  }
  // rl saves 2 gates on average -> difference +2
  for (int i = 0; i < 10; ++i) {
    records.push_back(rec("rl", Setting::medium, 9, i, 10));
    records.push_back(rec("pmh-star", Setting::medium, 9, i, 12));
  }
  auto rows = ablation_pmh_star(records);
  REQUIRE(rows.size() == 2);
  for (const AblationRow& r : rows) {
    if (r.setting == Setting::rare) {
      CHECK(r.difference == doctest::Approx(0.0));
    } else {
      CHECK(r.difference == doctest::Approx(2.0));
      CHECK(r.rl_mean == doctest::Approx(10.0));
      CHECK(r.pmh_star_mean == doctest::Approx(12.0));
    }
  }
}

TEST_CASE("summary csv round trip") {
  std::vector<BenchRecord> records;
  Rng rng(9);
  for (int i = 0; i < 37; ++i)
    records.push_back(rec("pmh", Setting::overcooked, 7, i,
                          3 + static_cast<int>(rng.below(20))));
  for (int i = 0; i < 12; ++i)
    records.push_back(rec("rl", Setting::rare, 4, i,
                          1 + static_cast<int>(rng.below(5)), i % 3 == 0));
  auto summary = summarize(records);
  auto parsed = parse_summary_csv(summary_to_csv(summary));
  REQUIRE(parsed.size() == summary.size());
  for (size_t i = 0; i < summary.size(); ++i) {
    CHECK(parsed[i].method == summary[i].method);
    CHECK(parsed[i].setting == summary[i].setting);
    CHECK(parsed[i].n == summary[i].n);
    CHECK(parsed[i].count == summary[i].count);
    CHECK(parsed[i].mean == summary[i].mean);      // %.17g exact round trip
    CHECK(parsed[i].stddev == summary[i].stddev);
    CHECK(parsed[i].fallbacks == summary[i].fallbacks);
  }
}

TEST_CASE("plot data shapes") {
  namespace fs = std::filesystem;
  std::vector<BenchRecord> records;
  for (int i = 0; i < 25; ++i)
    records.push_back(rec("pmh", Setting::rare, 6, i, 4));
  auto summary = summarize(records);
  fs::path dir = fs::temp_directory_path() / "cnotsynth_plotdata_test";
  fs::remove_all(dir);
  emit_plot_data(dir.string(), records, summary);

  std::ifstream line_f(dir / "lineplot.csv");
  std::string line;
  int line_rows = -1;  // minus header
  while (std::getline(line_f, line))
    if (!line.empty()) ++line_rows;
  CHECK(line_rows == 1);

  std::ifstream dist_f(dir / "distributions.csv");
  int dist_rows = -1;
  while (std::getline(dist_f, line))
    if (!line.empty()) ++dist_rows;
  CHECK(dist_rows == 25);  // suite_size rows per (method, setting, n)
  fs::remove_all(dir);
}

TEST_CASE("rl and pmh-star records keep exact pipeline accounting") {
  // A freshly initialized (untrained) policy is enough to exercise the
  // embed / direct / stripe routes; unsolved matrices fall back to PMH and
  // are flagged.
  Rng rng(33);
  Checkpoint ck;
  ck.m = 4;
  ck.params = PolicyParams::create(16, 12, {8}, rng);
  ck.cfg.seed = 33;

  BenchConfig cfg;
  cfg.sizes = {3, 4, 7};
  cfg.settings = {Setting::rare};
  cfg.suite_size = 8;
  cfg.runs_per_matrix = 4;
  cfg.methods = {"rl", "pmh-star"};
  cfg.seed = 14;
  auto records = run_benchmark(cfg, &ck);
  int rl_seen = 0, star_seen = 0;
  for (const BenchRecord& r : records) {
    CHECK(r.verified);
    if (r.method == "rl") {
      ++rl_seen;
      if (r.n > ck.m)
        CHECK(r.cnot_count == r.prefix_count + r.block_count);
      if (r.n <= ck.m) CHECK(r.prefix_count == 0);
    } else {
      ++star_seen;
      CHECK(r.n > ck.m);
      CHECK(r.cnot_count == r.prefix_count + r.block_count);
      CHECK_FALSE(r.fallback);
    }
  }
  CHECK(rl_seen == 24);   // all three sizes
  CHECK(star_seen == 8);  // only n=7 exceeds the policy size
}

TEST_CASE("aggregates are record-order invariant") {
  std::vector<BenchRecord> records;
  Rng rng(21);
  for (int i = 0; i < 50; ++i)
    records.push_back(rec("pmh", Setting::medium, 8, i,
                          2 + static_cast<int>(rng.below(30))));
  auto summary1 = summarize(records);
  std::reverse(records.begin(), records.end());
  auto summary2 = summarize(records);
  CHECK(summary_to_csv(summary1) == summary_to_csv(summary2));
}
