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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "cnotsynth/ppo.hpp"

using namespace cnotsynth;

namespace {

// Synthetic batch with the policy's own log-probs/values (ratio == 1) or
// with perturbed ones.
TrajectoryBatch make_batch(const PolicyParams& p, int steps, Rng& rng,
                           bool self_consistent) {
  TrajectoryBatch b;
  b.obs_dim = p.obs_dim;
  b.num_actions = p.num_actions;
  for (int t = 0; t < steps; ++t) {
    std::vector<double> obs(p.obs_dim);
    for (double& x : obs) x = rng.next_bit() ? 1.0 : 0.0;
    PolicyOutput out = policy_forward(p, obs);
    std::vector<double> logp = log_softmax(out.logits);
    int action = static_cast<int>(rng.below(p.num_actions));
    b.observations.insert(b.observations.end(), obs.begin(), obs.end());
    b.actions.push_back(action);
    b.log_probs.push_back(self_consistent ? logp[action]
                                          : logp[action] + 0.3 * rng.next_double());
    b.values.push_back(out.value);
    b.rewards.push_back(rng.next_double() - 0.3);
    b.dones.push_back(rng.below(5) == 0 ? 1 : 0);
  }
  b.bootstrap_value = 0.0;
  b.finish(0.99, 0.95);
  return b;
}

double fd_loss(PolicyParams p, std::vector<std::vector<double>> PolicyParams::*field,
               size_t layer, size_t index, double eps,
               const TrajectoryBatch& batch, const std::vector<int>& idx,
               const PpoConfig& cfg) {
  (p.*field)[layer][index] += eps;
  return ppo_loss_and_grad(p, batch, idx, cfg, nullptr, nullptr).total;
}

}  // namespace

TEST_CASE("zero weights give a uniform policy and zero value") {
  PolicyParams p = PolicyParams::zeros(4, 6, {3});
  PolicyOutput out = policy_forward(p, std::vector<double>{1, 0, 1, 1});
  CHECK(out.value == 0.0);
  std::vector<double> probs = softmax(out.logits);
  for (double x : probs) CHECK(x == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("softmax and log_softmax are consistent") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(1 + rng.below(20));
    for (double& x : logits) x = 20.0 * (rng.next_double() - 0.5);
    std::vector<double> probs = softmax(logits);
    std::vector<double> logp = log_softmax(logits);
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-12);
    double sum_exp = 0.0;
    for (double lp : logp) sum_exp += std::exp(lp);
    CHECK(std::abs(sum_exp - 1.0) < 1e-9);
  }
}

TEST_CASE("forward pass is pure") {
  Rng rng(7);
  PolicyParams p = PolicyParams::create(9, 6, {16, 16}, rng);
  std::vector<double> obs(9);
  for (double& x : obs) x = rng.next_bit();
  PolicyOutput a = policy_forward(p, obs);
  PolicyOutput b = policy_forward(p, obs);
  CHECK(a.logits == b.logits);
  CHECK(a.value == b.value);
  for (double z : a.logits) CHECK(std::isfinite(z));
  CHECK(std::isfinite(a.value));
}

TEST_CASE("gae closed-form cases") {
  std::vector<double> adv, ret;
  // single terminal step with zero values: A = r
  compute_gae({1.5}, {0.0, 0.0}, {1}, 0.99, 0.95, adv, ret);
  CHECK(adv[0] == doctest::Approx(1.5));
  CHECK(ret[0] == doctest::Approx(1.5));

  // discount = 0: A_t = r_t - v_t
  compute_gae({1.0, 2.0, 3.0}, {0.5, 0.25, 0.125, 0.0}, {0, 0, 0}, 0.0, 0.95,
              adv, ret);
  CHECK(adv[0] == doctest::Approx(0.5));
  CHECK(adv[1] == doctest::Approx(1.75));
  CHECK(adv[2] == doctest::Approx(2.875));

  // hand-unrolled 3-step sequence, discount 0.5, lambda 0.5
  compute_gae({1.0, 2.0, 3.0}, {0.5, 1.0, 1.5, 2.0}, {0, 0, 1}, 0.5, 0.5, adv,
              ret);
  CHECK(adv[2] == doctest::Approx(1.5));
  CHECK(adv[1] == doctest::Approx(2.125));
  CHECK(adv[0] == doctest::Approx(1.53125));
  CHECK(ret[0] == doctest::Approx(2.03125));
  CHECK(ret[1] == doctest::Approx(3.125));
  CHECK(ret[2] == doctest::Approx(3.0));
}

TEST_CASE("gae matches a brute-force unrolled oracle on 5-step trajectories") {
  // oracle: A_t = sum_l (discount*lambda)^l delta_{t+l}, cut at dones
  auto oracle = [](const std::vector<double>& r, const std::vector<double>& v,
                   const std::vector<uint8_t>& dones, double g, double l) {
    size_t n = r.size();
    std::vector<double> delta(n), adv(n);
    for (size_t t = 0; t < n; ++t)
      delta[t] = r[t] + g * v[t + 1] * (dones[t] ? 0.0 : 1.0) - v[t];
    for (size_t t = 0; t < n; ++t) {
      double acc = 0.0, w = 1.0;
      for (size_t u = t; u < n; ++u) {
        acc += w * delta[u];
        if (dones[u]) break;
        w *= g * l;
      }
      adv[t] = acc;
    }
    return adv;
  };

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(5), v(6);
    std::vector<uint8_t> dones(5);
    for (auto& x : r) x = 2.0 * rng.next_double() - 1.0;
    for (auto& x : v) x = 2.0 * rng.next_double() - 1.0;
    for (auto& d : dones) d = rng.below(3) == 0 ? 1 : 0;
    double g = 0.9, l = 0.8;
    std::vector<double> adv, ret;
    compute_gae(r, v, dones, g, l, adv, ret);
    std::vector<double> expect = oracle(r, v, dones, g, l);
    for (size_t t = 0; t < 5; ++t) {
      CHECK(adv[t] == doctest::Approx(expect[t]).epsilon(1e-12));
      CHECK(ret[t] == doctest::Approx(expect[t] + v[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("ratio-one batch: policy loss is minus the mean advantage") {
  Rng rng(13);
  PolicyParams p = PolicyParams::create(6, 4, {8}, rng);
  TrajectoryBatch batch = make_batch(p, 32, rng, true);
  std::vector<int> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  PpoConfig cfg;
  LossTerms terms = ppo_loss_and_grad(p, batch, idx, cfg, nullptr, nullptr);
  double mean_adv =
      std::accumulate(batch.advantages.begin(), batch.advantages.end(), 0.0) /
      batch.size();
  CHECK(terms.policy == doctest::Approx(-mean_adv).epsilon(1e-9));
  CHECK(terms.clip_fraction == 0.0);
  CHECK(terms.approx_kl == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(17);
  // miniature network, every parameter checked
  PolicyParams p = PolicyParams::create(3, 3, {4}, rng);
  TrajectoryBatch batch = make_batch(p, 12, rng, false);
  std::vector<int> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  PpoConfig cfg;
  cfg.clip_ratio = 0.5;  // keep most samples differentiable

  std::vector<std::vector<double>> gw, gb;
  for (const auto& m : p.w) gw.emplace_back(m.size(), 0.0);
  for (const auto& v : p.b) gb.emplace_back(v.size(), 0.0);
  ppo_loss_and_grad(p, batch, idx, cfg, &gw, &gb);

  const double eps = 1e-6;
  double worst = 0.0;
  auto check_block = [&](std::vector<std::vector<double>> PolicyParams::*field,
                         const std::vector<std::vector<double>>& grads) {
    for (size_t l = 0; l < grads.size(); ++l) {
      for (size_t i = 0; i < grads[l].size(); ++i) {
        double up = fd_loss(p, field, l, i, eps, batch, idx, cfg);
        double dn = fd_loss(p, field, l, i, -eps, batch, idx, cfg);
        double fd = (up - dn) / (2 * eps);
        double analytic = grads[l][i];
        double rel = std::abs(analytic - fd) /
                     std::max({std::abs(analytic), std::abs(fd), 1e-6});
        worst = std::max(worst, rel);
      }
    }
  };
  check_block(&PolicyParams::w, gw);
  check_block(&PolicyParams::b, gb);
  CHECK(worst <= 1e-4);
}

TEST_CASE("value loss decreases over 50 updates on a fixed batch") {
  Rng rng(19);
  PolicyParams p = PolicyParams::create(6, 4, {16}, rng);
  TrajectoryBatch batch = make_batch(p, 128, rng, true);
  PpoConfig cfg;
  cfg.epochs_per_update = 1;
  cfg.minibatch = 128;
  cfg.learning_rate = 1e-2;
  cfg.entropy_coeff = 0.0;
  PpoTrainer trainer(p, cfg);
  std::vector<int> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  double first = ppo_loss_and_grad(trainer.params(), batch, idx, cfg, nullptr,
                                   nullptr)
                     .value;
  for (int i = 0; i < 50; ++i) trainer.update(batch);
  double last = ppo_loss_and_grad(trainer.params(), batch, idx, cfg, nullptr,
                                  nullptr)
                    .value;
  CHECK(last < first);
}

TEST_CASE("update rejects bad batches and non-finite losses surface") {
  Rng rng(23);
  PolicyParams p = PolicyParams::create(4, 3, {4}, rng);
  PpoTrainer trainer(p, PpoConfig{});
  TrajectoryBatch empty;
  CHECK_THROWS_AS(trainer.update(empty), std::invalid_argument);

  TrajectoryBatch bad = make_batch(trainer.params(), 8, rng, true);
  bad.advantages[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(trainer.update(bad));
}

TEST_CASE("checkpoint round trip") {
  Rng rng(29);
  PolicyParams p = PolicyParams::create(16, 12, {32, 32}, rng);
  PpoConfig cfg;
  cfg.seed = 77;
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "cnotsynth_ckpt_test";
  fs::create_directories(dir);
  std::string path = (dir / "policy.ckpt").string();
  save_checkpoint(path, p, cfg, 4);

  Checkpoint ck = load_checkpoint(path);
  CHECK(ck.m == 4);
  CHECK(ck.params.obs_dim == 16);
  CHECK(ck.params.num_actions == 12);
  CHECK(ck.params.hidden == std::vector<int>{32, 32});
  CHECK(ck.cfg.seed == 77);

  // float32 storage is stable: save(load(x)) is byte-identical
  std::string path2 = (dir / "policy2.ckpt").string();
  save_checkpoint(path2, ck.params, ck.cfg, ck.m);
  Checkpoint ck2 = load_checkpoint(path2);
  CHECK(ck2.params.w == ck.params.w);
  CHECK(ck2.params.b == ck.params.b);

  // loaded params give identical forward outputs across loads
  std::vector<double> obs(16);
  for (double& x : obs) x = rng.next_bit();
  PolicyOutput a = policy_forward(ck.params, obs);
  PolicyOutput b = policy_forward(ck2.params, obs);
  CHECK(a.logits == b.logits);
  CHECK(a.value == b.value);
  fs::remove_all(dir);
}

TEST_CASE("training is reproducible bit-for-bit") {
  auto run = [] {
    EnvConfig env_cfg;
    env_cfg.m = 3;
    Schedule s = scaled_schedule(default_schedule(), 0.0008);  // 80 episodes
    CnotEnv env(env_cfg, s, 5);
    PpoConfig cfg;
    cfg.seed = 5;
    cfg.hidden = {16};
    cfg.rollout_horizon = 64;
    cfg.epochs_per_update = 2;
    return train(env, cfg);
  };
  TrainResult a = run();
  TrainResult b = run();
  CHECK(a.params.w == b.params.w);
  CHECK(a.params.b == b.params.b);
  CHECK(a.log.total_steps == b.log.total_steps);
  CHECK(a.log.total_episodes == b.log.total_episodes);
}

TEST_CASE("evaluate_best_of basics") {
  Rng rng(31);
  PolicyParams p = PolicyParams::create(9, 6, {16}, rng);

  // identity input: success with zero gates
  Rng eval_rng(1);
  BestOfOutcome id = evaluate_best_of(p, identity(3), 5, 10, eval_rng);
  CHECK(id.solved);
  CHECK(id.best.size() == 0);

  // one-gate matrix: even a random policy solves within a few runs
  BitMatrix m = apply_cnot(identity(3), 0, 1);
  Rng eval_rng2(2);
  BestOfOutcome out = evaluate_best_of(p, m, 200, 27, eval_rng2);
  CHECK(out.solved);
  CHECK(verify_solves(m, out.best));

  // prefix property: best over N runs is non-increasing in N
  size_t prev = SIZE_MAX;
  for (int runs : {10, 50, 200}) {
    Rng r(7);  // same seed stream prefix
    BestOfOutcome o = evaluate_best_of(p, m, runs, 27, r);
    if (o.solved) {
      CHECK(o.best.size() <= prev);
      prev = o.best.size();
    }
  }
}
