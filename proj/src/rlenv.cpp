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

#include "cnotsynth/rlenv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cnotsynth {

double reward(const BitMatrix& before, const BitMatrix& after,
              const RewardSpec& spec) {
  if (before.size() != after.size())
    throw std::invalid_argument("reward: dimension mismatch");
  const int n = before.size();
  if (after.is_identity()) return spec.solve_bonus;
  if (hamming_to_identity(before) != hamming_to_identity(after)) {
    const int d = diag_ones(after) - diag_ones(before);
    const int dbar = offdiag_ones(after) - offdiag_ones(before);
    return spec.diag_coeff * d / n -
           spec.offdiag_coeff * dbar / (static_cast<double>(n) * n);
  }
  return -spec.idle_penalty_num / (static_cast<double>(n) * n);
}

CnotGate decode_action(int a, int m) {
  if (a < 0 || a >= action_count(m))
    throw std::invalid_argument("action index out of range");
  const int i = a / (m - 1);
  const int r = a % (m - 1);
  const int j = r + (r >= i ? 1 : 0);
  // Move (i, j): row i ^= row j.
  return CnotGate{j, i};
}

int encode_action(int i, int j, int m) {
  if (i == j || i < 0 || j < 0 || i >= m || j >= m)
    throw std::invalid_argument("encode_action: bad pair");
  return i * (m - 1) + j - (j > i ? 1 : 0);
}

Schedule default_schedule() {
  return {
      {0, 1500, PhaseKind::permutation, BudgetExpr::half_n},
      {1500, 3000, PhaseKind::triangular, BudgetExpr::half_n},
      {3000, 6000, PhaseKind::mixed, BudgetExpr::half_n},
      {6000, 10000, PhaseKind::random_cnots, BudgetExpr::half_n},
      {10000, 20000, PhaseKind::random_cnots, BudgetExpr::linear_n},
      {20000, 50000, PhaseKind::random_cnots, BudgetExpr::nlogn},
      {50000, 100000, PhaseKind::random_cnots, BudgetExpr::n_squared},
  };
}

Schedule scaled_schedule(const Schedule& s, double factor) {
  if (factor <= 0) throw std::invalid_argument("scale factor must be > 0");
  Schedule out;
  long prev = 0;
  for (const SchedulePhase& p : s) {
    long end = std::max(prev + 1, std::lround(p.end * factor));
    out.push_back({prev, end, p.kind, p.budget});
    prev = end;
  }
  return out;
}

long schedule_total(const Schedule& s) { return s.empty() ? 0 : s.back().end; }

const SchedulePhase& phase_at(const Schedule& s, long episode) {
  for (const SchedulePhase& p : s)
    if (episode >= p.start && episode < p.end) return p;
  throw std::out_of_range("episode " + std::to_string(episode) +
                          " outside the schedule");
}

int phase_index_at(const Schedule& s, long episode) {
  for (size_t i = 0; i < s.size(); ++i)
    if (episode >= s[i].start && episode < s[i].end) return static_cast<int>(i);
  throw std::out_of_range("episode " + std::to_string(episode) +
                          " outside the schedule");
}

int budget_value(BudgetExpr e, int m, LogBase base) {
  switch (e) {
    case BudgetExpr::half_n:
      return (m + 1) / 2;
    case BudgetExpr::linear_n:
      return m;
    case BudgetExpr::nlogn:
      return nlogn_budget(m, base);
    case BudgetExpr::n_squared:
      return m * m;
  }
  return 0;
}

MatrixClass curriculum_source(long episode, const Schedule& s, int m,
                              LogBase base, Rng& rng) {
  const SchedulePhase& p = phase_at(s, episode);
  PhaseKind kind = p.kind;
  if (kind == PhaseKind::mixed)
    kind = rng.next_bit() ? PhaseKind::permutation : PhaseKind::triangular;
  switch (kind) {
    case PhaseKind::permutation:
      return {MatrixKind::permutation, 0};
    case PhaseKind::triangular:
      return {rng.next_bit() ? MatrixKind::upper_triangular
                             : MatrixKind::lower_triangular,
              0};
    case PhaseKind::random_cnots:
      return {MatrixKind::random_cnots, budget_value(p.budget, m, base)};
    case PhaseKind::mixed:
      break;
  }
  throw std::logic_error("unresolved curriculum phase");
}

namespace {

const char* phase_kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::permutation:
      return "permutation";
    case PhaseKind::triangular:
      return "triangular";
    case PhaseKind::mixed:
      return "mixed";
    case PhaseKind::random_cnots:
      return "random_cnots";
  }
  return "?";
}

PhaseKind parse_phase_kind(const std::string& s) {
  if (s == "permutation") return PhaseKind::permutation;
  if (s == "triangular") return PhaseKind::triangular;
  if (s == "mixed") return PhaseKind::mixed;
  if (s == "random_cnots") return PhaseKind::random_cnots;
  throw std::runtime_error("schedule: unknown class " + s);
}

const char* budget_name(BudgetExpr e) {
  switch (e) {
    case BudgetExpr::half_n:
      return "half_n";
    case BudgetExpr::linear_n:
      return "n";
    case BudgetExpr::nlogn:
      return "nlogn";
    case BudgetExpr::n_squared:
      return "n_sq";
  }
  return "?";
}

BudgetExpr parse_budget(const std::string& s) {
  if (s == "half_n") return BudgetExpr::half_n;
  if (s == "n") return BudgetExpr::linear_n;
  if (s == "nlogn") return BudgetExpr::nlogn;
  if (s == "n_sq") return BudgetExpr::n_squared;
  throw std::runtime_error("schedule: unknown budget " + s);
}

}  // namespace

std::string schedule_to_json(const Schedule& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SchedulePhase& p : s) {
    nlohmann::json item;
    item["start"] = p.start;
    item["end"] = p.end;
    item["class"] = phase_kind_name(p.kind);
    if (p.kind == PhaseKind::random_cnots) item["budget"] = budget_name(p.budget);
    arr.push_back(item);
  }
  return arr.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::runtime_error("schedule: expected a list");
  Schedule out;
  for (const auto& item : arr) {
    SchedulePhase p;
    p.start = item.at("start").get<long>();
    p.end = item.at("end").get<long>();
    p.kind = parse_phase_kind(item.at("class").get<std::string>());
    if (p.kind == PhaseKind::random_cnots)
      p.budget = parse_budget(item.at("budget").get<std::string>());
    out.push_back(p);
  }
  long expected = 0;
  for (const SchedulePhase& p : out) {
    if (p.start != expected || p.end <= p.start)
      throw std::runtime_error("schedule: phases must partition [0, total)");
    expected = p.end;
  }
  return out;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

void save_schedule(const std::string& path, const Schedule& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule file: " + path);
  out << schedule_to_json(s);
}

CnotEnv::CnotEnv(const EnvConfig& cfg, Schedule schedule, uint64_t seed)
    : cfg_(cfg),
      schedule_(std::move(schedule)),
      rng_(seed),
      matrix_(identity(cfg.m)) {
  if (cfg_.m < 2) throw std::invalid_argument("environment needs m >= 2");
  max_steps_ = cfg_.max_steps > 0 ? cfg_.max_steps : 3 * cfg_.m * cfg_.m;
}

std::vector<double> CnotEnv::reset() {
  ++episode_;
  MatrixClass cls =
      curriculum_source(episode_, schedule_, cfg_.m, cfg_.log_base, rng_);
  do {
    matrix_ = draw_from_class(cls, cfg_.m, rng_);
  } while (matrix_.is_identity());  // zero-length episodes carry no signal
  steps_ = 0;
  done_ = false;
  gates_.clear();
  return observation();
}

std::vector<double> CnotEnv::reset_with(const BitMatrix& m) {
  if (m.size() != cfg_.m)
    throw std::invalid_argument("reset_with: dimension mismatch");
  matrix_ = m;
  steps_ = 0;
  done_ = m.is_identity();
  gates_.clear();
  return observation();
}

CnotEnv::StepResult CnotEnv::step(int action) {
  if (done_) throw std::logic_error("step called after the episode ended");
  CnotGate g = decode_action(action, cfg_.m);
  BitMatrix before = matrix_;
  apply_cnot_inplace(matrix_, g.control, g.target);
  gates_.push_back(g);
  ++steps_;
  StepResult r;
  r.reward = reward(before, matrix_, cfg_.reward_spec);
  r.solved = matrix_.is_identity();
  done_ = r.solved || steps_ >= max_steps_;
  r.done = done_;
  return r;
}

std::vector<double> CnotEnv::observation() const {
  std::vector<double> obs(static_cast<size_t>(observation_size()));
  write_observation(obs.data());
  return obs;
}

void CnotEnv::write_observation(double* out) const {
  const int m = cfg_.m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out[i * m + j] = matrix_.get(i, j) ? 1.0 : 0.0;
}

}  // namespace cnotsynth
