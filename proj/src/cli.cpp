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

#include "cnotsynth/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cnotsynth/bench.hpp"
#include "cnotsynth/exact.hpp"
#include "cnotsynth/pmh.hpp"
#include "cnotsynth/ppo.hpp"
#include "cnotsynth/resize.hpp"

namespace cnotsynth {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

LogBase parse_log_base(const std::string& s) {
  if (s == "natural") return LogBase::natural;
  if (s == "base2") return LogBase::base2;
  throw CLI::ValidationError("--log-base must be natural or base2");
}

std::vector<int> parse_sizes(const std::string& spec) {
  std::vector<int> sizes;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      int lo = std::stoi(item.substr(0, dash));
      int hi = std::stoi(item.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) sizes.push_back(n);
    } else {
      sizes.push_back(std::stoi(item));
    }
  }
  if (sizes.empty()) throw CLI::ValidationError("--sizes is empty");
  return sizes;
}

std::vector<std::string> split_list(const std::string& spec) {
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_gen(const std::string& setting_name_arg, int n, int count,
            uint64_t seed, const std::string& out_dir,
            const std::string& log_base_arg) {
  Setting setting = parse_setting(setting_name_arg);
  LogBase base = parse_log_base(log_base_arg);
  std::vector<BitMatrix> suite = gen_suite(setting, n, count, seed, base);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "matrix_%04d.txt", i);
    save_matrix((fs::path(out_dir) / name).string(), suite[i]);
  }
  nlohmann::json manifest;
  manifest["setting"] = setting_name(setting);
  manifest["n"] = n;
  manifest["count"] = count;
  manifest["seed"] = seed;
  manifest["budget"] = setting_budget(setting, n, base);
  manifest["log_base"] = log_base_arg;
  std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  std::cout << "wrote " << count << " matrices to " << out_dir << '\n';
  return kExitOk;
}

int cmd_synth(const std::string& method, const std::string& in_path,
              const std::string& out_path, const std::string& policy_path,
              int stripe_width, uint64_t seed, int runs,
              const std::string& qasm_path) {
  BitMatrix m = load_matrix(in_path);
  SynthesisResult result;
  int prefix = 0;

  if (method == "pmh") {
    result = synthesize_pmh(m, PmhConfig{stripe_width});
  } else if (method == "exact") {
    OptimalSolution sol = optimal_solve(m);
    result.circuit = sol.witness;
    result.method = "exact";
    result.verified = verify_solves(m, sol.witness);
  } else if (method == "rl" || method == "pmh-star") {
    if (method == "rl" && policy_path.empty())
      throw std::runtime_error("--method rl needs --policy");
    std::optional<Checkpoint> ck;
    if (!policy_path.empty()) ck = load_checkpoint(policy_path);
    if (method == "pmh-star") {
      int pm = ck ? ck->m : 8;
      if (m.size() <= pm)
        throw std::runtime_error("pmh-star needs n > reduced size");
      StripeReduction red = gaussian_stripe(m, pm, PmhConfig{stripe_width});
      Circuit block = synthesize_pmh(red.reduced, PmhConfig{stripe_width}).circuit;
      result.circuit =
          concat(red.prefix_circuit, lift_circuit(block, red.k, m.size()));
      result.method = "pmh_star";
      prefix = static_cast<int>(red.prefix_circuit.size());
      result.verified = verify_solves(m, result.circuit);
    } else {
      const int pm = ck->m;
      Rng rng(Rng::derive(seed, 0xC11ULL));
      const int block_steps = 3 * pm * pm;
      if (m.size() < pm) {
        BitMatrix padded = embed(m, pm);
        BestOfOutcome best =
            evaluate_best_of(ck->params, padded, runs, block_steps, rng);
        if (!best.solved)
          throw std::runtime_error(
              "rl synthesis failed on every run; try --runs or pmh");
        result.circuit = best.best;
        result.method = "rl+embed";
        result.verified = verify_solves(padded, best.best);
      } else if (m.size() == pm) {
        BestOfOutcome best =
            evaluate_best_of(ck->params, m, runs, block_steps, rng);
        if (!best.solved)
          throw std::runtime_error(
              "rl synthesis failed on every run; try --runs or pmh");
        result.circuit = best.best;
        result.method = "rl";
        result.verified = verify_solves(m, best.best);
      } else {
        StripeReduction red = gaussian_stripe(m, pm, PmhConfig{stripe_width});
        BestOfOutcome best =
            evaluate_best_of(ck->params, red.reduced, runs, block_steps, rng);
        if (!best.solved)
          throw std::runtime_error(
              "rl synthesis failed on every run; try --runs or pmh");
        result.circuit = concat(red.prefix_circuit,
                                lift_circuit(best.best, red.k, m.size()));
        result.method = "rl+stripe";
        prefix = static_cast<int>(red.prefix_circuit.size());
        result.verified = verify_solves(m, result.circuit);
      }
    }
  } else {
    throw std::runtime_error("unknown method: " + method);
  }

  if (!result.verified) {
    std::cerr << "error: synthesized circuit failed verification; nothing "
                 "written\n";
    return kExitVerification;
  }
  if (!out_path.empty()) save_circuit(out_path, result.circuit);
  if (!qasm_path.empty()) {
    std::ofstream q(qasm_path, std::ios::binary);
    q << to_qasm(result.circuit);
  }
  nlohmann::json summary;
  summary["method"] = result.method;
  summary["n"] = m.size();
  summary["cnot_count"] = result.circuit.size();
  summary["prefix_count"] = prefix;
  summary["verified"] = result.verified;
  if (!out_path.empty()) summary["out"] = out_path;
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& matrix_path, const std::string& circuit_path) {
  BitMatrix m = load_matrix(matrix_path);
  Circuit c = load_circuit(circuit_path);
  if (verify_solves(m, c)) {
    std::cout << "ok: circuit solves the matrix (" << c.size() << " gates)\n";
    return kExitOk;
  }
  std::cerr << "verification failed: circuit does not reduce the matrix to "
               "the identity\n";
  return kExitVerification;
}

int cmd_oracle(const std::string& in_path, const std::string& out_path) {
  BitMatrix m = load_matrix(in_path);
  OptimalSolution sol = optimal_solve(m);
  std::cout << sol.count << '\n';
  std::cout << serialize(sol.witness);
  if (!out_path.empty()) save_circuit(out_path, sol.witness);
  return kExitOk;
}

int cmd_train(int m, const std::string& schedule_path, double episodes_scale,
              uint64_t seed, const std::string& out_path,
              const std::string& hidden_arg, int horizon, double lr,
              int epochs, int max_steps, bool quiet) {
  Schedule schedule =
      schedule_path.empty() ? default_schedule() : load_schedule(schedule_path);
  if (episodes_scale != 1.0) schedule = scaled_schedule(schedule, episodes_scale);

  PpoConfig cfg;
  cfg.seed = seed;
  if (horizon > 0) cfg.rollout_horizon = horizon;
  if (lr > 0) cfg.learning_rate = lr;
  if (epochs > 0) cfg.epochs_per_update = epochs;
  if (!hidden_arg.empty()) {
    cfg.hidden.clear();
    for (const std::string& h : split_list(hidden_arg))
      cfg.hidden.push_back(std::stoi(h));
  }

  EnvConfig env_cfg;
  env_cfg.m = m;
  if (max_steps > 0) env_cfg.max_steps = max_steps;
  CnotEnv env(env_cfg, schedule, Rng::derive(seed, 0xE17ULL));

  long total = schedule_total(schedule);
  std::cout << "training m=" << m << " for " << total << " episodes\n";
  TrainResult result = train(
      env, cfg, out_path,
      quiet ? TrainProgressFn{}
            : [&](long done, long total_eps, const UpdateMetrics& u) {
                std::cout << "episodes " << done << '/' << total_eps
                          << "  policy_loss=" << u.policy_loss
                          << "  value_loss=" << u.value_loss
                          << "  entropy=" << u.entropy << '\n';
              });
  for (const PhaseStats& p : result.log.phases) {
    std::cout << "phase " << p.phase << ": episodes=" << p.episodes
              << " solve_rate=" << p.solve_rate
              << " mean_length=" << p.mean_episode_length << '\n';
  }
  std::cout << "checkpoint written to " << out_path << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& sizes_arg, const std::string& settings_arg,
              const std::string& methods_arg, int suite_size, int runs,
              uint64_t seed, const std::string& policy_path,
              const std::string& out_dir, int stripe_width, int jobs,
              bool timings, const std::string& log_base_arg) {
  BenchConfig cfg;
  cfg.sizes = parse_sizes(sizes_arg);
  cfg.settings.clear();
  for (const std::string& s : split_list(settings_arg))
    cfg.settings.push_back(parse_setting(s));
  cfg.methods = split_list(methods_arg);
  cfg.suite_size = suite_size;
  cfg.runs_per_matrix = runs;
  cfg.seed = seed;
  cfg.stripe_width = stripe_width;
  cfg.jobs = jobs;
  cfg.timings = timings;
  cfg.log_base = parse_log_base(log_base_arg);

  std::optional<Checkpoint> policy;
  if (!policy_path.empty()) policy = load_checkpoint(policy_path);
  std::vector<BenchRecord> records =
      run_benchmark(cfg, policy ? &*policy : nullptr);
  write_benchmark_outputs(out_dir, records);
  std::cout << render_summary_table(summarize(records));
  std::cout << "wrote " << records.size() << " records to " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"cnotsynth: minimal-CNOT synthesis of linear reversible circuits"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a benchmark suite");
  std::string gen_setting = "rare", gen_out, gen_log = "natural";
  int gen_n = 8, gen_count = 100;
  uint64_t gen_seed = 0;
  gen->add_option("--setting", gen_setting, "rare | medium | overcooked");
  gen->add_option("--n", gen_n, "matrix dimension")->required();
  gen->add_option("--count", gen_count, "suite size");
  gen->add_option("--seed", gen_seed, "suite seed");
  gen->add_option("--out-dir", gen_out, "output directory")->required();
  gen->add_option("--log-base", gen_log, "natural | base2");

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize a circuit for a matrix");
  std::string sy_method = "pmh", sy_in, sy_out, sy_policy, sy_qasm;
  int sy_width = 2, sy_runs = 100;
  uint64_t sy_seed = 0;
  synth->add_option("--method", sy_method, "pmh | rl | pmh-star | exact");
  synth->add_option("--in", sy_in, "matrix file")->required();
  synth->add_option("--out", sy_out, "circuit file");
  synth->add_option("--policy", sy_policy, "policy checkpoint (rl)");
  synth->add_option("--stripe-width", sy_width, "stripe width for pmh passes");
  synth->add_option("--seed", sy_seed, "sampling seed (rl)");
  synth->add_option("--runs", sy_runs, "best-of runs (rl)");
  synth->add_option("--qasm", sy_qasm, "also write an OpenQASM file");

  // verify
  auto* verify = app.add_subcommand("verify", "check that a circuit solves a matrix");
  std::string ve_matrix, ve_circuit;
  verify->add_option("matrix", ve_matrix, "matrix file")->required();
  verify->add_option("circuit", ve_circuit, "circuit file")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact minimal count (n <= 5)");
  std::string or_in, or_out;
  oracle->add_option("--in", or_in, "matrix file")->required();
  oracle->add_option("--out", or_out, "write witness circuit here");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a PPO policy");
  int tr_m = 8, tr_horizon = 0, tr_epochs = 0, tr_max_steps = 0;
  double tr_scale = 1.0, tr_lr = 0.0;
  uint64_t tr_seed = 0;
  std::string tr_schedule, tr_out, tr_hidden;
  bool tr_quiet = false;
  train_cmd->add_option("--m", tr_m, "training size m");
  train_cmd->add_option("--schedule", tr_schedule, "schedule JSON file");
  train_cmd->add_option("--episodes-scale", tr_scale,
                        "scale factor on the schedule (1.0 = full run)");
  train_cmd->add_option("--seed", tr_seed, "training seed");
  train_cmd->add_option("--out", tr_out, "checkpoint path")->required();
  train_cmd->add_option("--hidden", tr_hidden, "hidden sizes, e.g. 128,128");
  train_cmd->add_option("--horizon", tr_horizon, "rollout horizon");
  train_cmd->add_option("--lr", tr_lr, "learning rate");
  train_cmd->add_option("--epochs", tr_epochs, "epochs per update");
  train_cmd->add_option("--max-steps", tr_max_steps, "episode step cap");
  train_cmd->add_flag("--quiet", tr_quiet, "suppress per-update logs");

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark protocol");
  std::string be_sizes = "3-15", be_settings = "rare,medium,overcooked";
  std::string be_methods = "pmh", be_policy, be_out = "bench_out";
  std::string be_log = "natural";
  int be_suite = 100, be_runs = 100, be_width = 2, be_jobs = 1;
  uint64_t be_seed = 0;
  bool be_timings = false;
  bench->add_option("--sizes", be_sizes, "e.g. 3-15 or 3,5,9");
  bench->add_option("--settings", be_settings, "comma list");
  bench->add_option("--methods", be_methods, "comma list: pmh,rl,pmh-star,exact");
  bench->add_option("--suite-size", be_suite, "matrices per (setting, n)");
  bench->add_option("--runs", be_runs, "best-of runs per matrix (rl)");
  bench->add_option("--seed", be_seed, "master seed");
  bench->add_option("--policy", be_policy, "policy checkpoint");
  bench->add_option("--out-dir", be_out, "output directory");
  bench->add_option("--stripe-width", be_width, "pmh stripe width");
  bench->add_option("--jobs", be_jobs, "parallel workers (output unchanged)");
  bench->add_flag("--timings", be_timings, "record wall times in records.csv");
  bench->add_option("--log-base", be_log, "natural | base2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_setting, gen_n, gen_count, gen_seed, gen_out, gen_log);
    if (synth->parsed())
      return cmd_synth(sy_method, sy_in, sy_out, sy_policy, sy_width, sy_seed,
                       sy_runs, sy_qasm);
    if (verify->parsed()) return cmd_verify(ve_matrix, ve_circuit);
    if (oracle->parsed()) return cmd_oracle(or_in, or_out);
    if (train_cmd->parsed())
      return cmd_train(tr_m, tr_schedule, tr_scale, tr_seed, tr_out, tr_hidden,
                       tr_horizon, tr_lr, tr_epochs, tr_max_steps, tr_quiet);
    if (bench->parsed())
      return cmd_bench(be_sizes, be_settings, be_methods, be_suite, be_runs,
                       be_seed, be_policy, be_out, be_width, be_jobs,
                       be_timings, be_log);
  } catch (const std::logic_error& e) {
    // internal invariant / verification failures
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace cnotsynth
