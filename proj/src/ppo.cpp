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

#include "cnotsynth/ppo.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace cnotsynth {

namespace {

// Layer sizes as (in, out) pairs: hidden stack, then policy head, then
// value head.
std::vector<std::pair<int, int>> layer_shapes(int obs_dim, int num_actions,
                                              const std::vector<int>& hidden) {
  std::vector<std::pair<int, int>> shapes;
  int in = obs_dim;
  for (int h : hidden) {
    shapes.emplace_back(in, h);
    in = h;
  }
  shapes.emplace_back(in, num_actions);  // policy head
  shapes.emplace_back(in, 1);            // value head
  return shapes;
}

double uniform_pm(Rng& rng, double bound) {
  return (2.0 * rng.next_double() - 1.0) * bound;
}

}  // namespace

PolicyParams PolicyParams::zeros(int obs_dim, int num_actions,
                                 const std::vector<int>& hidden) {
  PolicyParams p;
  p.obs_dim = obs_dim;
  p.num_actions = num_actions;
  p.hidden = hidden;
  for (auto [in, out] : layer_shapes(obs_dim, num_actions, hidden)) {
    p.w.emplace_back(static_cast<size_t>(in) * out, 0.0);
    p.b.emplace_back(static_cast<size_t>(out), 0.0);
  }
  return p;
}

PolicyParams PolicyParams::create(int obs_dim, int num_actions,
                                  const std::vector<int>& hidden, Rng& rng) {
  PolicyParams p = zeros(obs_dim, num_actions, hidden);
  auto shapes = layer_shapes(obs_dim, num_actions, hidden);
  for (size_t l = 0; l < shapes.size(); ++l) {
    auto [in, out] = shapes[l];
    double bound = std::sqrt(6.0 / (in + out));  // Xavier, tanh activations
    if (l == shapes.size() - 2) bound *= 0.01;   // near-uniform initial policy
    for (double& x : p.w[l]) x = uniform_pm(rng, bound);
  }
  return p;
}

size_t PolicyParams::parameter_count() const {
  size_t total = 0;
  for (const auto& m : w) total += m.size();
  for (const auto& v : b) total += v.size();
  return total;
}

namespace {

// Forward pass retaining hidden activations for backprop. acts[0] is the
// observation; acts[l+1] the post-tanh activation of hidden layer l.
struct ForwardTrace {
  std::vector<std::vector<double>> acts;
  std::vector<double> logits;
  double value = 0.0;
};

void forward_trace(const PolicyParams& p, const double* obs,
                   ForwardTrace& t) {
  const size_t n_hidden = p.hidden.size();
  t.acts.resize(n_hidden + 1);
  t.acts[0].assign(obs, obs + p.obs_dim);
  for (size_t l = 0; l < n_hidden; ++l) {
    const int in = l == 0 ? p.obs_dim : p.hidden[l - 1];
    const int out = p.hidden[l];
    t.acts[l + 1].resize(out);
    const std::vector<double>& a = t.acts[l];
    for (int o = 0; o < out; ++o) {
      const double* wrow = p.w[l].data() + static_cast<size_t>(o) * in;
      double z = p.b[l][o];
      for (int i = 0; i < in; ++i) z += wrow[i] * a[i];
      t.acts[l + 1][o] = std::tanh(z);
    }
  }
  const std::vector<double>& top = t.acts[n_hidden];
  const int in = top.empty() ? p.obs_dim : static_cast<int>(top.size());
  const double* top_ptr = n_hidden == 0 ? obs : top.data();
  t.logits.resize(p.num_actions);
  const size_t lp = n_hidden;  // policy head index
  for (int o = 0; o < p.num_actions; ++o) {
    const double* wrow = p.w[lp].data() + static_cast<size_t>(o) * in;
    double z = p.b[lp][o];
    for (int i = 0; i < in; ++i) z += wrow[i] * top_ptr[i];
    t.logits[o] = z;
  }
  const size_t lv = n_hidden + 1;  // value head index
  {
    const double* wrow = p.w[lv].data();
    double z = p.b[lv][0];
    for (int i = 0; i < in; ++i) z += wrow[i] * top_ptr[i];
    t.value = z;
  }
}

}  // namespace

PolicyOutput policy_forward(const PolicyParams& p, const double* obs) {
  ForwardTrace t;
  forward_trace(p, obs, t);
  return {std::move(t.logits), t.value};
}

PolicyOutput policy_forward(const PolicyParams& p,
                            const std::vector<double>& obs) {
  if (static_cast<int>(obs.size()) != p.obs_dim)
    throw std::invalid_argument("policy_forward: observation shape mismatch");
  return policy_forward(p, obs.data());
}

std::vector<double> log_softmax(const std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  std::vector<double> out = log_softmax(logits);
  for (double& x : out) x = std::exp(x);
  return out;
}

int sample_categorical(const std::vector<double>& probs, Rng& rng) {
  double u = rng.next_double();
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // numerical tail
}

void compute_gae(const std::vector<double>& rewards,
                 const std::vector<double>& values,
                 const std::vector<uint8_t>& dones, double discount,
                 double lambda, std::vector<double>& advantages,
                 std::vector<double>& returns) {
  const size_t steps = rewards.size();
  if (dones.size() != steps || values.size() != steps + 1)
    throw std::invalid_argument(
        "compute_gae: rewards/dones need length T, values length T+1");
  advantages.assign(steps, 0.0);
  returns.assign(steps, 0.0);
  double running = 0.0;
  for (size_t t = steps; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double delta =
        rewards[t] + discount * values[t + 1] * not_done - values[t];
    running = delta + discount * lambda * not_done * running;
    advantages[t] = running;
    returns[t] = running + values[t];
  }
}

void TrajectoryBatch::clear() {
  observations.clear();
  actions.clear();
  log_probs.clear();
  rewards.clear();
  values.clear();
  dones.clear();
  advantages.clear();
  returns.clear();
  bootstrap_value = 0.0;
}

void TrajectoryBatch::finish(double discount, double lambda) {
  std::vector<double> v = values;
  v.push_back(bootstrap_value);
  compute_gae(rewards, v, dones, discount, lambda, advantages, returns);
}

LossTerms ppo_loss_and_grad(const PolicyParams& p, const TrajectoryBatch& batch,
                            const std::vector<int>& indices,
                            const PpoConfig& cfg,
                            std::vector<std::vector<double>>* grad_w,
                            std::vector<std::vector<double>>* grad_b) {
  if (indices.empty())
    throw std::invalid_argument("ppo_loss_and_grad: empty minibatch");
  const double inv_b = 1.0 / static_cast<double>(indices.size());
  const size_t n_hidden = p.hidden.size();
  const size_t lp = n_hidden, lv = n_hidden + 1;

  LossTerms terms;
  ForwardTrace trace;
  std::vector<double> dlogits(static_cast<size_t>(p.num_actions));
  std::vector<double> dtop, dprev;

  for (int idx : indices) {
    const double* obs = batch.observations.data() +
                        static_cast<size_t>(idx) * batch.obs_dim;
    forward_trace(p, obs, trace);
    const int a = batch.actions[idx];
    std::vector<double> logp = log_softmax(trace.logits);
    std::vector<double> prob(logp.size());
    for (size_t i = 0; i < logp.size(); ++i) prob[i] = std::exp(logp[i]);

    const double adv = batch.advantages[idx];
    const double log_ratio = logp[a] - batch.log_probs[idx];
    const double ratio = std::exp(log_ratio);
    const double clipped =
        std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
    const double surr_unclipped = ratio * adv;
    const double surr_clipped = clipped * adv;
    const bool use_unclipped = surr_unclipped <= surr_clipped;
    terms.policy -= std::min(surr_unclipped, surr_clipped) * inv_b;
    if (std::abs(ratio - 1.0) > cfg.clip_ratio)
      terms.clip_fraction += inv_b;
    terms.approx_kl += ((ratio - 1.0) - log_ratio) * inv_b;

    double entropy = 0.0;
    for (size_t i = 0; i < prob.size(); ++i)
      if (prob[i] > 0) entropy -= prob[i] * logp[i];
    terms.entropy += entropy * inv_b;

    const double verr = trace.value - batch.returns[idx];
    terms.value += verr * verr * inv_b;

    if (!grad_w) continue;

    // d(policy term)/dlogits: the surrogate only passes gradient when the
    // active branch depends on rho.
    double g = 0.0;
    if (use_unclipped || std::abs(ratio - 1.0) <= cfg.clip_ratio)
      g = adv * ratio;
    for (int k = 0; k < p.num_actions; ++k) {
      double dpolicy = -g * ((k == a ? 1.0 : 0.0) - prob[k]);
      double dentropy = -prob[k] * (logp[k] + entropy);
      dlogits[k] = (dpolicy - cfg.entropy_coeff * dentropy) * inv_b;
    }
    const double dvalue = cfg.value_coeff * 2.0 * verr * inv_b;

    // Backprop through heads into the top hidden activation.
    const std::vector<double>& top = trace.acts[n_hidden];
    const int top_dim = n_hidden == 0 ? p.obs_dim : static_cast<int>(top.size());
    const double* top_ptr = n_hidden == 0 ? obs : top.data();
    dtop.assign(static_cast<size_t>(top_dim), 0.0);
    for (int o = 0; o < p.num_actions; ++o) {
      const double d = dlogits[o];
      if (d == 0.0) continue;
      double* gw = (*grad_w)[lp].data() + static_cast<size_t>(o) * top_dim;
      const double* wrow = p.w[lp].data() + static_cast<size_t>(o) * top_dim;
      for (int i = 0; i < top_dim; ++i) {
        gw[i] += d * top_ptr[i];
        dtop[i] += d * wrow[i];
      }
      (*grad_b)[lp][o] += d;
    }
    {
      double* gw = (*grad_w)[lv].data();
      const double* wrow = p.w[lv].data();
      for (int i = 0; i < top_dim; ++i) {
        gw[i] += dvalue * top_ptr[i];
        dtop[i] += dvalue * wrow[i];
      }
      (*grad_b)[lv][0] += dvalue;
    }

    // Backprop through the hidden stack.
    for (size_t l = n_hidden; l-- > 0;) {
      const std::vector<double>& act = trace.acts[l + 1];
      const std::vector<double>& in_act = trace.acts[l];
      const int out = static_cast<int>(act.size());
      const int in = static_cast<int>(in_act.size());
      dprev.assign(static_cast<size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double dz = dtop[o] * (1.0 - act[o] * act[o]);
        if (dz == 0.0) continue;
        double* gw = (*grad_w)[l].data() + static_cast<size_t>(o) * in;
        const double* wrow = p.w[l].data() + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          gw[i] += dz * in_act[i];
          dprev[i] += dz * wrow[i];
        }
        (*grad_b)[l][o] += dz;
      }
      dtop.swap(dprev);
    }
  }

  terms.total = terms.policy + cfg.value_coeff * terms.value -
                cfg.entropy_coeff * terms.entropy;
  return terms;
}

PpoTrainer::PpoTrainer(PolicyParams params, const PpoConfig& cfg)
    : params_(std::move(params)),
      cfg_(cfg),
      rng_(Rng::derive(cfg.seed, 0x9907ULL)) {
  for (const auto& m : params_.w) {
    mw_.emplace_back(m.size(), 0.0);
    vw_.emplace_back(m.size(), 0.0);
  }
  for (const auto& v : params_.b) {
    mb_.emplace_back(v.size(), 0.0);
    vb_.emplace_back(v.size(), 0.0);
  }
}

void PpoTrainer::adam_step(const std::vector<std::vector<double>>& gw,
                           const std::vector<std::vector<double>>& gb,
                           double* norm_out) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double sq = 0.0;
  for (const auto& g : gw)
    for (double x : g) sq += x * x;
  for (const auto& g : gb)
    for (double x : g) sq += x * x;
  double norm = std::sqrt(sq);
  if (norm_out) *norm_out = norm;
  double scale = 1.0;
  if (cfg_.grad_clip > 0 && norm > cfg_.grad_clip)
    scale = cfg_.grad_clip / norm;

  ++adam_t_;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t_));
  auto apply = [&](std::vector<double>& theta, std::vector<double>& m,
                   std::vector<double>& v, const std::vector<double>& g) {
    for (size_t i = 0; i < theta.size(); ++i) {
      double gi = g[i] * scale;
      m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
      v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
      theta[i] -= cfg_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  };
  for (size_t l = 0; l < params_.w.size(); ++l)
    apply(params_.w[l], mw_[l], vw_[l], gw[l]);
  for (size_t l = 0; l < params_.b.size(); ++l)
    apply(params_.b[l], mb_[l], vb_[l], gb[l]);
}

UpdateMetrics PpoTrainer::update(const TrajectoryBatch& batch) {
  if (batch.size() == 0)
    throw std::invalid_argument("ppo update on an empty batch");
  if (batch.advantages.size() != batch.size())
    throw std::invalid_argument("batch not finished (advantages missing)");

  // Normalize advantages across the whole update batch.
  TrajectoryBatch work = batch;
  double mean = std::accumulate(work.advantages.begin(), work.advantages.end(),
                                0.0) /
                static_cast<double>(work.size());
  double var = 0.0;
  for (double a : work.advantages) var += (a - mean) * (a - mean);
  double stddev = std::sqrt(var / static_cast<double>(work.size()));
  for (double& a : work.advantages) a = (a - mean) / (stddev + 1e-8);

  std::vector<int> order(work.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::vector<double>> gw, gb;
  for (const auto& m : params_.w) gw.emplace_back(m.size(), 0.0);
  for (const auto& v : params_.b) gb.emplace_back(v.size(), 0.0);

  UpdateMetrics metrics;
  long passes = 0;
  for (int epoch = 0; epoch < cfg_.epochs_per_update; ++epoch) {
    // Fisher-Yates with the trainer rng keeps updates reproducible.
    for (size_t i = order.size(); i > 1; --i) {
      size_t j = rng_.below(i);
      std::swap(order[i - 1], order[j]);
    }
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg_.minibatch)) {
      size_t stop = std::min(order.size(),
                             start + static_cast<size_t>(cfg_.minibatch));
      std::vector<int> idx(order.begin() + start, order.begin() + stop);
      for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
      for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
      LossTerms terms = ppo_loss_and_grad(params_, work, idx, cfg_, &gw, &gb);
      if (!std::isfinite(terms.total))
        throw std::runtime_error(
            "ppo update aborted: non-finite loss (policy=" +
            std::to_string(terms.policy) +
            ", value=" + std::to_string(terms.value) +
            ", entropy=" + std::to_string(terms.entropy) + ")");
      double norm = 0.0;
      adam_step(gw, gb, &norm);
      metrics.policy_loss += terms.policy;
      metrics.value_loss += terms.value;
      metrics.entropy += terms.entropy;
      metrics.approx_kl += terms.approx_kl;
      metrics.clip_fraction += terms.clip_fraction;
      metrics.grad_norm += norm;
      ++passes;
    }
  }
  if (passes > 0) {
    metrics.policy_loss /= passes;
    metrics.value_loss /= passes;
    metrics.entropy /= passes;
    metrics.approx_kl /= passes;
    metrics.clip_fraction /= passes;
    metrics.grad_norm /= passes;
  }
  return metrics;
}

TrainResult train(CnotEnv& env, const PpoConfig& cfg,
                  const std::string& checkpoint_path,
                  const TrainProgressFn& progress) {
  Rng init_rng(Rng::derive(cfg.seed, 0x11ULL));
  PolicyParams params = PolicyParams::create(
      env.observation_size(), env.num_actions(), cfg.hidden, init_rng);
  PpoTrainer trainer(std::move(params), cfg);

  const long total_episodes = env.total_episodes();
  const Schedule& schedule = env.schedule();
  TrainLog log;
  log.phases.resize(schedule.size());
  for (size_t i = 0; i < schedule.size(); ++i)
    log.phases[i].phase = static_cast<int>(i);
  std::vector<double> episode_length_sums(schedule.size(), 0.0);

  TrajectoryBatch batch;
  batch.obs_dim = env.observation_size();
  batch.num_actions = env.num_actions();

  long episodes_done = 0;
  int current_phase = 0;
  std::vector<double> obs = env.reset();

  auto maybe_checkpoint_phase = [&](int phase) {
    if (checkpoint_path.empty()) return;
    save_checkpoint(checkpoint_path + ".phase" + std::to_string(phase),
                    trainer.params(), cfg, env.m());
  };

  while (episodes_done < total_episodes) {
    batch.clear();
    bool ended_with_done = false;
    while (static_cast<int>(batch.size()) < cfg.rollout_horizon &&
           episodes_done < total_episodes) {
      PolicyOutput out = policy_forward(trainer.params(), obs.data());
      std::vector<double> logp = log_softmax(out.logits);
      std::vector<double> prob(logp.size());
      for (size_t i = 0; i < logp.size(); ++i) prob[i] = std::exp(logp[i]);
      int action = sample_categorical(prob, trainer.rng());

      batch.observations.insert(batch.observations.end(), obs.begin(),
                                obs.end());
      batch.actions.push_back(action);
      batch.log_probs.push_back(logp[action]);
      batch.values.push_back(out.value);

      CnotEnv::StepResult sr = env.step(action);
      batch.rewards.push_back(sr.reward);
      batch.dones.push_back(sr.done ? 1 : 0);
      ended_with_done = sr.done;
      ++log.total_steps;

      if (sr.done) {
        int phase = phase_index_at(schedule, env.episode());
        PhaseStats& st = log.phases[phase];
        ++st.episodes;
        if (sr.solved) ++st.solved;
        episode_length_sums[phase] += env.steps_taken();
        ++episodes_done;
        if (episodes_done >= total_episodes) break;
        long next_episode = env.episode() + 1;
        int next_phase = phase_index_at(schedule, next_episode);
        if (next_phase != current_phase) {
          maybe_checkpoint_phase(current_phase);
          current_phase = next_phase;
        }
        obs = env.reset();
      } else {
        obs = env.observation();
      }
    }
    if (batch.size() == 0) break;
    batch.bootstrap_value =
        ended_with_done ? 0.0
                        : policy_forward(trainer.params(), obs.data()).value;
    batch.finish(cfg.discount, cfg.gae_lambda);
    UpdateMetrics metrics = trainer.update(batch);
    log.updates.push_back(metrics);
    if (progress) progress(episodes_done, total_episodes, metrics);
  }

  for (size_t i = 0; i < log.phases.size(); ++i) {
    PhaseStats& st = log.phases[i];
    if (st.episodes > 0) {
      st.solve_rate = static_cast<double>(st.solved) / st.episodes;
      st.mean_episode_length = episode_length_sums[i] / st.episodes;
    }
  }
  log.total_episodes = episodes_done;
  if (!checkpoint_path.empty())
    save_checkpoint(checkpoint_path, trainer.params(), cfg, env.m());
  return {trainer.params(), std::move(log)};
}

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(out, bits);
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u32(out, bits);
}

struct Reader {
  const std::string& data;
  size_t pos = 0;
  void need(size_t n) const {
    if (pos + n > data.size())
      throw std::runtime_error("checkpoint: truncated file");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
};

std::string encode_config(const PpoConfig& cfg) {
  std::string out;
  put_f64(out, cfg.clip_ratio);
  put_f64(out, cfg.discount);
  put_f64(out, cfg.gae_lambda);
  put_f64(out, cfg.learning_rate);
  put_u32(out, static_cast<uint32_t>(cfg.epochs_per_update));
  put_u32(out, static_cast<uint32_t>(cfg.rollout_horizon));
  put_u32(out, static_cast<uint32_t>(cfg.minibatch));
  put_f64(out, cfg.value_coeff);
  put_f64(out, cfg.entropy_coeff);
  put_f64(out, cfg.grad_clip);
  put_u64(out, cfg.seed);
  return out;
}

uint32_t fnv1a(const std::string& data) {
  uint32_t h = 2166136261u;
  for (unsigned char c : data) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

constexpr uint32_t kCheckpointMagic = 0x43534E43;  // "CNSC"
constexpr uint32_t kCheckpointVersion = 1;

}  // namespace

void save_checkpoint(const std::string& path, const PolicyParams& params,
                     const PpoConfig& cfg, int m) {
  std::string out;
  put_u32(out, kCheckpointMagic);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<uint32_t>(m));
  put_u32(out, static_cast<uint32_t>(params.obs_dim));
  put_u32(out, static_cast<uint32_t>(params.num_actions));
  put_u32(out, static_cast<uint32_t>(params.hidden.size()));
  for (int h : params.hidden) put_u32(out, static_cast<uint32_t>(h));
  std::string cfg_bytes = encode_config(cfg);
  put_u32(out, fnv1a(cfg_bytes));
  out += cfg_bytes;
  put_u32(out, static_cast<uint32_t>(params.w.size()));
  for (size_t l = 0; l < params.w.size(); ++l) {
    put_u32(out, static_cast<uint32_t>(params.w[l].size()));
    for (double x : params.w[l]) put_f32(out, static_cast<float>(x));
    put_u32(out, static_cast<uint32_t>(params.b[l].size()));
    for (double x : params.b[l]) put_f32(out, static_cast<float>(x));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  Reader r{data};
  if (r.u32() != kCheckpointMagic)
    throw std::runtime_error("checkpoint: bad magic");
  if (r.u32() != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version");
  Checkpoint ck;
  ck.m = static_cast<int>(r.u32());
  ck.params.obs_dim = static_cast<int>(r.u32());
  ck.params.num_actions = static_cast<int>(r.u32());
  uint32_t n_hidden = r.u32();
  for (uint32_t i = 0; i < n_hidden; ++i)
    ck.params.hidden.push_back(static_cast<int>(r.u32()));
  uint32_t stored_hash = r.u32();
  size_t cfg_start = r.pos;
  ck.cfg.clip_ratio = r.f64();
  ck.cfg.discount = r.f64();
  ck.cfg.gae_lambda = r.f64();
  ck.cfg.learning_rate = r.f64();
  ck.cfg.epochs_per_update = static_cast<int>(r.u32());
  ck.cfg.rollout_horizon = static_cast<int>(r.u32());
  ck.cfg.minibatch = static_cast<int>(r.u32());
  ck.cfg.value_coeff = r.f64();
  ck.cfg.entropy_coeff = r.f64();
  ck.cfg.grad_clip = r.f64();
  ck.cfg.seed = r.u64();
  ck.cfg.hidden = ck.params.hidden;
  if (fnv1a(data.substr(cfg_start, r.pos - cfg_start)) != stored_hash)
    throw std::runtime_error("checkpoint: config hash mismatch");
  uint32_t layers = r.u32();
  for (uint32_t l = 0; l < layers; ++l) {
    uint32_t wn = r.u32();
    std::vector<double> w(wn);
    for (uint32_t i = 0; i < wn; ++i) w[i] = r.f32();
    uint32_t bn = r.u32();
    std::vector<double> b(bn);
    for (uint32_t i = 0; i < bn; ++i) b[i] = r.f32();
    ck.params.w.push_back(std::move(w));
    ck.params.b.push_back(std::move(b));
  }
  if (ck.params.obs_dim != ck.m * ck.m)
    throw std::runtime_error("checkpoint: observation dim does not match m");
  return ck;
}

BestOfOutcome evaluate_best_of(const PolicyParams& params, const BitMatrix& m,
                               int runs, int max_steps, Rng& rng) {
  if (runs < 1) throw std::invalid_argument("evaluate_best_of: runs must be >= 1");
  if (params.obs_dim != m.size() * m.size())
    throw std::invalid_argument("evaluate_best_of: policy size mismatch");
  const int dim = m.size();

  BestOfOutcome out;
  out.runs = runs;
  out.best.n = dim;
  if (m.is_identity()) {
    out.solved = true;
    out.solving_runs = runs;
    return out;
  }

  std::vector<double> obs(static_cast<size_t>(params.obs_dim));
  for (int run = 0; run < runs; ++run) {
    BitMatrix state = m;
    std::vector<CnotGate> gates;
    for (int step = 0; step < max_steps; ++step) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          obs[static_cast<size_t>(i) * dim + j] = state.get(i, j) ? 1.0 : 0.0;
      PolicyOutput po = policy_forward(params, obs.data());
      int action = sample_categorical(softmax(po.logits), rng);
      CnotGate g = decode_action(action, dim);
      apply_cnot_inplace(state, g.control, g.target);
      gates.push_back(g);
      if (state.is_identity()) break;
    }
    if (state.is_identity()) {
      ++out.solving_runs;
      if (!out.solved || gates.size() < out.best.gates.size()) {
        out.solved = true;
        out.best.gates = std::move(gates);
      }
    }
  }
  if (out.solved && !verify_solves(m, out.best))
    throw std::logic_error("evaluate_best_of: best circuit failed verification");
  return out;
}

}  // namespace cnotsynth
