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

#include "cnotsynth/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cnotsynth/exact.hpp"
#include "cnotsynth/pmh.hpp"
#include "cnotsynth/resize.hpp"

namespace cnotsynth {

namespace {

int setting_index(Setting s) { return static_cast<int>(s); }

int method_index(const std::string& m) {
  if (m == "pmh") return 0;
  if (m == "rl") return 1;
  if (m == "pmh-star") return 2;
  if (m == "exact") return 3;
  throw std::invalid_argument("unknown benchmark method: " + m);
}

uint64_t matrix_stream(Setting s, int n, int id, int method) {
  return (static_cast<uint64_t>(setting_index(s) + 1) << 48) ^
         (static_cast<uint64_t>(n) << 32) ^
         (static_cast<uint64_t>(id) << 8) ^ static_cast<uint64_t>(method);
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

BenchRecord make_record(const std::string& method, Setting s, int n, int id) {
  BenchRecord r;
  r.method = method;
  r.setting = s;
  r.n = n;
  r.matrix_id = id;
  return r;
}

BenchRecord run_pmh(const BitMatrix& m, Setting s, int id,
                    const BenchConfig& cfg) {
  Timer timer;
  SynthesisResult res = synthesize_pmh(m, PmhConfig{cfg.stripe_width});
  BenchRecord r = make_record("pmh", s, m.size(), id);
  r.cnot_count = static_cast<int>(res.circuit.size());
  r.block_count = r.cnot_count;
  r.verified = res.verified;
  if (cfg.timings) r.wall_time = timer.seconds();
  return r;
}

BenchRecord run_exact(const BitMatrix& m, Setting s, int id,
                      const BenchConfig& cfg) {
  Timer timer;
  OptimalSolution sol = optimal_solve(m);
  BenchRecord r = make_record("exact", s, m.size(), id);
  r.cnot_count = sol.count;
  r.block_count = sol.count;
  r.verified = verify_solves(m, sol.witness);
  if (cfg.timings) r.wall_time = timer.seconds();
  return r;
}

BenchRecord run_rl(const BitMatrix& m, Setting s, int id,
                   const BenchConfig& cfg, const Checkpoint& policy,
                   Rng& rng) {
  const int n = m.size();
  const int pm = policy.m;
  const int block_steps = 3 * pm * pm;
  Timer timer;
  BenchRecord r = make_record("rl", s, n, id);

  if (n < pm) {
    BitMatrix padded = embed(m, pm);
    BestOfOutcome best = evaluate_best_of(policy.params, padded,
                                          cfg.runs_per_matrix, block_steps, rng);
    if (best.solved) {
      r.cnot_count = static_cast<int>(best.best.size());
      r.block_count = 0;
      for (const CnotGate& g : best.best.gates)
        if (g.control >= pm - n && g.target >= pm - n) ++r.block_count;
      r.verified = verify_solves(padded, best.best);
    } else {
      SynthesisResult fb = synthesize_pmh(m, PmhConfig{cfg.stripe_width});
      r.cnot_count = static_cast<int>(fb.circuit.size());
      r.block_count = r.cnot_count;
      r.verified = fb.verified;
      r.fallback = true;
    }
  } else if (n == pm) {
    BestOfOutcome best =
        evaluate_best_of(policy.params, m, cfg.runs_per_matrix, block_steps, rng);
    if (best.solved) {
      r.cnot_count = static_cast<int>(best.best.size());
      r.block_count = r.cnot_count;
      r.verified = verify_solves(m, best.best);
    } else {
      SynthesisResult fb = synthesize_pmh(m, PmhConfig{cfg.stripe_width});
      r.cnot_count = static_cast<int>(fb.circuit.size());
      r.block_count = r.cnot_count;
      r.verified = fb.verified;
      r.fallback = true;
    }
  } else {
    StripeReduction red = gaussian_stripe(m, pm, PmhConfig{cfg.stripe_width});
    r.prefix_count = static_cast<int>(red.prefix_circuit.size());
    BestOfOutcome best = evaluate_best_of(policy.params, red.reduced,
                                          cfg.runs_per_matrix, block_steps, rng);
    Circuit block;
    if (best.solved) {
      block = best.best;
    } else {
      block = synthesize_pmh(red.reduced, PmhConfig{cfg.stripe_width}).circuit;
      r.fallback = true;
    }
    Circuit total =
        concat(red.prefix_circuit, lift_circuit(block, red.k, n));
    r.cnot_count = static_cast<int>(total.size());
    r.block_count = static_cast<int>(block.size());
    r.verified = verify_solves(m, total);
  }
  if (cfg.timings) r.wall_time = timer.seconds();
  return r;
}

BenchRecord run_pmh_star(const BitMatrix& m, Setting s, int id,
                         const BenchConfig& cfg, int policy_m) {
  const int n = m.size();
  Timer timer;
  StripeReduction red = gaussian_stripe(m, policy_m, PmhConfig{cfg.stripe_width});
  Circuit block = synthesize_pmh(red.reduced, PmhConfig{cfg.stripe_width}).circuit;
  Circuit total = concat(red.prefix_circuit, lift_circuit(block, red.k, n));
  BenchRecord r = make_record("pmh-star", s, n, id);
  r.prefix_count = static_cast<int>(red.prefix_circuit.size());
  r.block_count = static_cast<int>(block.size());
  r.cnot_count = static_cast<int>(total.size());
  r.verified = verify_solves(m, total);
  if (cfg.timings) r.wall_time = timer.seconds();
  return r;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg,
                                       const Checkpoint* policy) {
  if (cfg.suite_size < 1)
    throw std::invalid_argument("benchmark suite size must be >= 1");
  for (const std::string& m : cfg.methods) method_index(m);  // validate
  const bool wants_rl =
      std::find(cfg.methods.begin(), cfg.methods.end(), "rl") != cfg.methods.end();
  const bool wants_star = std::find(cfg.methods.begin(), cfg.methods.end(),
                                    "pmh-star") != cfg.methods.end();
  const bool wants_exact = std::find(cfg.methods.begin(), cfg.methods.end(),
                                     "exact") != cfg.methods.end();
  if ((wants_rl || wants_star) && policy == nullptr)
    throw std::invalid_argument("rl / pmh-star methods need a policy checkpoint");
  if (wants_exact)
    for (int n : cfg.sizes)
      if (n > 5)
        throw std::invalid_argument("exact method requires sizes <= 5");

  struct Task {
    Setting setting;
    int n;
    int id;
    BitMatrix matrix;
  };
  std::vector<Task> tasks;
  for (Setting s : cfg.settings) {
    for (int n : cfg.sizes) {
      uint64_t suite_seed = Rng::derive(
          cfg.seed, (static_cast<uint64_t>(setting_index(s) + 1) << 16) ^
                        static_cast<uint64_t>(n));
      std::vector<BitMatrix> suite =
          gen_suite(s, n, cfg.suite_size, suite_seed, cfg.log_base);
      for (int i = 0; i < cfg.suite_size; ++i)
        tasks.push_back({s, n, i, std::move(suite[i])});
    }
  }

  std::vector<std::vector<BenchRecord>> slots(tasks.size());
  auto process = [&](size_t t) {
    const Task& task = tasks[t];
    std::vector<BenchRecord>& out = slots[t];
    for (const std::string& method : cfg.methods) {
      if (method == "pmh") {
        out.push_back(run_pmh(task.matrix, task.setting, task.id, cfg));
      } else if (method == "exact") {
        out.push_back(run_exact(task.matrix, task.setting, task.id, cfg));
      } else if (method == "rl") {
        Rng rng(Rng::derive(cfg.seed, matrix_stream(task.setting, task.n,
                                                    task.id, 1)));
        out.push_back(
            run_rl(task.matrix, task.setting, task.id, cfg, *policy, rng));
      } else if (method == "pmh-star") {
        if (task.n > policy->m)
          out.push_back(run_pmh_star(task.matrix, task.setting, task.id, cfg,
                                     policy->m));
      }
    }
    for (const BenchRecord& r : out)
      if (!r.verified)
        throw std::logic_error("benchmark produced an unverified circuit");
  };

  if (cfg.jobs <= 1) {
    for (size_t t = 0; t < tasks.size(); ++t) process(t);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (int w = 0; w < cfg.jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t t = static_cast<size_t>(w); t < tasks.size();
               t += static_cast<size_t>(cfg.jobs))
            process(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<BenchRecord> records;
  for (auto& slot : slots)
    for (BenchRecord& r : slot) records.push_back(std::move(r));
  return records;
}

namespace {

struct GroupKey {
  std::string method;
  int setting;
  int n;
  bool operator<(const GroupKey& o) const {
    if (method != o.method) return method < o.method;
    if (setting != o.setting) return setting < o.setting;
    return n < o.n;
  }
};

double sample_std(const std::vector<int>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (int x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  std::map<GroupKey, std::pair<std::vector<int>, int>> groups;
  for (const BenchRecord& r : records) {
    if (!r.verified)
      throw std::invalid_argument("summarize: unverified record present");
    auto& slot = groups[{r.method, setting_index(r.setting), r.n}];
    slot.first.push_back(r.cnot_count);
    if (r.fallback) ++slot.second;
  }
  if (groups.empty()) throw std::invalid_argument("summarize: no records");
  std::vector<SummaryRow> rows;
  for (auto& [key, data] : groups) {
    std::vector<int>& counts = data.first;
    // fixed accumulation order keeps aggregates permutation-invariant
    std::sort(counts.begin(), counts.end());
    SummaryRow row;
    row.method = key.method;
    row.setting = static_cast<Setting>(key.setting);
    row.n = key.n;
    row.count = static_cast<int>(counts.size());
    double sum = 0.0;
    for (int c : counts) sum += c;
    row.mean = sum / counts.size();
    row.stddev = sample_std(counts, row.mean);
    row.fallbacks = data.second;
    rows.push_back(row);
  }
  return rows;
}

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
  std::vector<std::string> methods;
  std::vector<int> sizes;
  std::vector<Setting> settings;
  for (const SummaryRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end())
      sizes.push_back(r.n);
    if (std::find(settings.begin(), settings.end(), r.setting) ==
        settings.end())
      settings.push_back(r.setting);
  }
  std::sort(sizes.begin(), sizes.end());
  std::sort(settings.begin(), settings.end());
  // Table-I column order: RL before PMH inside each setting.
  std::vector<std::string> order = {"rl", "pmh", "pmh-star", "exact"};
  std::vector<std::string> cols;
  for (const std::string& m : order)
    if (std::find(methods.begin(), methods.end(), m) != methods.end())
      cols.push_back(m);

  auto find_row = [&](const std::string& m, Setting s,
                      int n) -> const SummaryRow* {
    for (const SummaryRow& r : rows)
      if (r.method == m && r.setting == s && r.n == n) return &r;
    return nullptr;
  };

  std::ostringstream os;
  os << "size";
  for (Setting s : settings)
    for (const std::string& m : cols)
      os << '\t' << setting_name(s) << ':' << m;
  os << '\n';
  char buf[64];
  for (int n : sizes) {
    os << n;
    for (Setting s : settings) {
      for (const std::string& m : cols) {
        const SummaryRow* r = find_row(m, s, n);
        if (r) {
          std::snprintf(buf, sizeof buf, "%.2f +- %.2f", r->mean, r->stddev);
          os << '\t' << buf;
        } else {
          os << '\t' << "-";
        }
      }
    }
    os << '\n';
  }
  return os.str();
}

std::vector<AblationRow> ablation_pmh_star(
    const std::vector<BenchRecord>& records) {
  std::vector<SummaryRow> rows = summarize(records);
  std::vector<AblationRow> out;
  for (const SummaryRow& rl : rows) {
    if (rl.method != "rl") continue;
    for (const SummaryRow& star : rows) {
      if (star.method != "pmh-star" || star.setting != rl.setting ||
          star.n != rl.n)
        continue;
      AblationRow row;
      row.setting = rl.setting;
      row.n = rl.n;
      row.rl_mean = rl.mean;
      row.pmh_star_mean = star.mean;
      row.difference = star.mean - rl.mean;
      out.push_back(row);
    }
  }
  return out;
}

namespace {

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_time(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string records_to_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << "# cnotsynth records v1\n";
  os << "method,setting,n,matrix_id,cnot_count,prefix_count,block_count,"
        "verified,wall_time,fallback\n";
  for (const BenchRecord& r : records) {
    os << r.method << ',' << setting_name(r.setting) << ',' << r.n << ','
       << r.matrix_id << ',' << r.cnot_count << ',' << r.prefix_count << ','
       << r.block_count << ',' << (r.verified ? 1 : 0) << ','
       << fmt_time(r.wall_time) << ',' << (r.fallback ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "# cnotsynth summary v1\n";
  os << "method,setting,n,count,mean,std,fallbacks\n";
  for (const SummaryRow& r : rows) {
    os << r.method << ',' << setting_name(r.setting) << ',' << r.n << ','
       << r.count << ',' << fmt_full(r.mean) << ',' << fmt_full(r.stddev)
       << ',' << r.fallbacks << '\n';
  }
  return os.str();
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<SummaryRow> rows;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column names
      continue;
    }
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 7)
      throw std::runtime_error("summary csv: bad field count");
    SummaryRow r;
    r.method = f[0];
    r.setting = parse_setting(f[1]);
    r.n = std::stoi(f[2]);
    r.count = std::stoi(f[3]);
    r.mean = std::stod(f[4]);
    r.stddev = std::stod(f[5]);
    r.fallbacks = std::stoi(f[6]);
    rows.push_back(r);
  }
  return rows;
}

std::string ablation_to_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "# cnotsynth ablation v1: difference = pmh_star_mean - rl_mean; "
        "positive = the RL pipeline saves gates\n";
  os << "setting,n,rl_mean,pmh_star_mean,difference\n";
  for (const AblationRow& r : rows) {
    os << setting_name(r.setting) << ',' << r.n << ',' << fmt_full(r.rl_mean)
       << ',' << fmt_full(r.pmh_star_mean) << ',' << fmt_full(r.difference)
       << '\n';
  }
  return os.str();
}

void emit_plot_data(const std::string& dir,
                    const std::vector<BenchRecord>& records,
                    const std::vector<SummaryRow>& summary) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "lineplot.csv", std::ios::binary);
    f << "method,setting,n,value\n";
    for (const SummaryRow& r : summary)
      f << r.method << ',' << setting_name(r.setting) << ',' << r.n << ','
        << fmt_full(r.mean) << '\n';
  }
  {
    std::ofstream f(fs::path(dir) / "distributions.csv", std::ios::binary);
    f << "method,setting,n,matrix_id,cnot_count\n";
    for (const BenchRecord& r : records)
      f << r.method << ',' << setting_name(r.setting) << ',' << r.n << ','
        << r.matrix_id << ',' << r.cnot_count << '\n';
  }
}

void write_benchmark_outputs(const std::string& dir,
                             const std::vector<BenchRecord>& records) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<SummaryRow> summary = summarize(records);
  {
    std::ofstream f(fs::path(dir) / "records.csv", std::ios::binary);
    f << records_to_csv(records);
  }
  {
    std::ofstream f(fs::path(dir) / "summary.csv", std::ios::binary);
    f << summary_to_csv(summary);
  }
  std::vector<AblationRow> ablation = ablation_pmh_star(records);
  if (!ablation.empty()) {
    std::ofstream f(fs::path(dir) / "ablation.csv", std::ios::binary);
    f << ablation_to_csv(ablation);
  }
  emit_plot_data((fs::path(dir) / "plotdata").string(), records, summary);
}

}  // namespace cnotsynth
