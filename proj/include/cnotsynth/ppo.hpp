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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cnotsynth/circuit.hpp"
#include "cnotsynth/rlenv.hpp"
#include "cnotsynth/rng.hpp"

namespace cnotsynth {

struct PpoConfig {
  double clip_ratio = 0.2;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  int epochs_per_update = 10;
  int rollout_horizon = 2048;
  int minibatch = 64;
  double value_coeff = 0.5;
  double entropy_coeff = 0.01;
  double grad_clip = 0.5;
  uint64_t seed = 0;
  std::vector<int> hidden = {128, 128};
};

/// Tanh MLP with a categorical policy head and a scalar value head. Layout:
/// hidden layers first, then the policy head, then the value head; each
/// weight matrix is row-major (out x in).
struct PolicyParams {
  int obs_dim = 0;
  int num_actions = 0;
  std::vector<int> hidden;
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;

  static PolicyParams create(int obs_dim, int num_actions,
                             const std::vector<int>& hidden, Rng& rng);
  static PolicyParams zeros(int obs_dim, int num_actions,
                            const std::vector<int>& hidden);
  size_t parameter_count() const;
};

struct PolicyOutput {
  std::vector<double> logits;
  double value = 0.0;
};

PolicyOutput policy_forward(const PolicyParams& p, const double* obs);
PolicyOutput policy_forward(const PolicyParams& p,
                            const std::vector<double>& obs);

std::vector<double> softmax(const std::vector<double>& logits);
std::vector<double> log_softmax(const std::vector<double>& logits);
int sample_categorical(const std::vector<double>& probs, Rng& rng);

/// GAE over one rollout. values has length T+1 (last entry bootstraps the
/// tail; pass 0 when the final transition is terminal).
///   delta_t = r_t + discount * v_{t+1} * (1 - done_t) - v_t
///   A_t     = delta_t + discount * lambda * (1 - done_t) * A_{t+1}
/// returns_t = A_t + v_t.
void compute_gae(const std::vector<double>& rewards,
                 const std::vector<double>& values,
                 const std::vector<uint8_t>& dones, double discount,
                 double lambda, std::vector<double>& advantages,
                 std::vector<double>& returns);

struct TrajectoryBatch {
  int obs_dim = 0;
  int num_actions = 0;
  std::vector<double> observations;  // T x obs_dim, row-major
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<uint8_t> dones;
  double bootstrap_value = 0.0;
  std::vector<double> advantages;
  std::vector<double> returns;

  size_t size() const { return actions.size(); }
  void clear();
  /// Fills advantages and returns via compute_gae.
  void finish(double discount, double lambda);
};

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

/// Clipped-surrogate PPO loss over the selected samples, using
/// batch.advantages as-is (callers normalize beforehand). When grad_w /
/// grad_b are non-null they receive the analytic gradient in the same
/// layout as the parameters.
LossTerms ppo_loss_and_grad(const PolicyParams& p, const TrajectoryBatch& batch,
                            const std::vector<int>& indices,
                            const PpoConfig& cfg,
                            std::vector<std::vector<double>>* grad_w,
                            std::vector<std::vector<double>>* grad_b);

struct UpdateMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;
};

/// Owns the parameters and the Adam state; update() runs the configured
/// epochs x minibatches over one batch. Advantages are normalized to mean 0,
/// std 1 across the batch before the surrogate step. A non-finite loss
/// aborts with diagnostics.
class PpoTrainer {
 public:
  PpoTrainer(PolicyParams params, const PpoConfig& cfg);

  const PolicyParams& params() const { return params_; }
  PolicyParams& mutable_params() { return params_; }
  const PpoConfig& config() const { return cfg_; }
  Rng& rng() { return rng_; }

  UpdateMetrics update(const TrajectoryBatch& batch);

 private:
  void adam_step(const std::vector<std::vector<double>>& gw,
                 const std::vector<std::vector<double>>& gb, double* norm_out);

  PolicyParams params_;
  PpoConfig cfg_;
  Rng rng_;
  std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
  long adam_t_ = 0;
};

struct PhaseStats {
  int phase = 0;
  long episodes = 0;
  long solved = 0;
  double solve_rate = 0.0;
  double mean_episode_length = 0.0;
};

struct TrainLog {
  std::vector<PhaseStats> phases;
  std::vector<UpdateMetrics> updates;
  long total_steps = 0;
  long total_episodes = 0;
};

struct TrainResult {
  PolicyParams params;
  TrainLog log;
};

using TrainProgressFn =
    std::function<void(long episodes_done, long total, const UpdateMetrics&)>;

/// Runs PPO over the environment's whole curriculum. Checkpoints are written
/// at phase boundaries (<path>.phase<i>) and at the end (<path>) when path
/// is non-empty. Single-threaded and bit-reproducible for a fixed seed.
TrainResult train(CnotEnv& env, const PpoConfig& cfg,
                  const std::string& checkpoint_path = "",
                  const TrainProgressFn& progress = nullptr);

struct Checkpoint {
  PolicyParams params;
  PpoConfig cfg;
  int m = 0;
};

/// Versioned binary format: header (m, layer sizes, config, config hash)
/// followed by flat little-endian float32 arrays.
void save_checkpoint(const std::string& path, const PolicyParams& params,
                     const PpoConfig& cfg, int m);
Checkpoint load_checkpoint(const std::string& path);

struct BestOfOutcome {
  bool solved = false;
  Circuit best;
  int solving_runs = 0;
  int runs = 0;
};

/// Samples the stochastic policy `runs` times on m and keeps the shortest
/// successful circuit. Every returned circuit replays m to the identity.
/// Failure (no solving run) is reported in the value, not thrown.
BestOfOutcome evaluate_best_of(const PolicyParams& params, const BitMatrix& m,
                               int runs, int max_steps, Rng& rng);

}  // namespace cnotsynth
