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

#include <string>
#include <vector>

#include "cnotsynth/bitmatrix.hpp"
#include "cnotsynth/circuit.hpp"
#include "cnotsynth/generators.hpp"
#include "cnotsynth/rng.hpp"

namespace cnotsynth {

/// Shaped reward constants. Defaults follow the training recipe: +0.7 on a
/// solving move, 0.2*d/n - 0.1*dbar/n^2 when the Hamming distance to the
/// identity changes (d / dbar = diagonal / off-diagonal ones delta), and
/// -0.001/n^2 for moves that leave the distance unchanged.
struct RewardSpec {
  double solve_bonus = 0.7;
  double diag_coeff = 0.2;
  double offdiag_coeff = 0.1;
  double idle_penalty_num = 0.001;
};

/// Reward for the transition `before` -> `after` (one CNOT apart).
double reward(const BitMatrix& before, const BitMatrix& after,
              const RewardSpec& spec);

inline int action_count(int m) { return m * (m - 1); }

/// Bijection between [0, m(m-1)) and ordered pairs (i, j), i != j. Move
/// (i, j) means "row i ^= row j", i.e. gate control=j, target=i.
CnotGate decode_action(int a, int m);
int encode_action(int i, int j, int m);  // index of the ordered pair (i, j)

enum class PhaseKind { permutation, triangular, mixed, random_cnots };

/// Budget expressions for random-CNOT phases, evaluated on the environment
/// size m: half_n = ceil(m/2), linear_n = m, nlogn = round(m log m),
/// n_squared = m^2.
enum class BudgetExpr { half_n, linear_n, nlogn, n_squared };

struct SchedulePhase {
  long start = 0;
  long end = 0;  // half-open [start, end)
  PhaseKind kind = PhaseKind::permutation;
  BudgetExpr budget = BudgetExpr::half_n;  // used when kind == random_cnots
};

/// Phases partition [0, total_episodes).
using Schedule = std::vector<SchedulePhase>;

/// The 100k-episode curriculum: permutations, triangulars, their mixture,
/// then random-CNOT matrices of budget n/2, n, n log n, n^2.
Schedule default_schedule();

/// Scales every phase boundary by `factor`, keeping phases non-empty and
/// contiguous.
Schedule scaled_schedule(const Schedule& s, double factor);

long schedule_total(const Schedule& s);
const SchedulePhase& phase_at(const Schedule& s, long episode);
int phase_index_at(const Schedule& s, long episode);

int budget_value(BudgetExpr e, int m, LogBase base);

/// Concrete matrix class for one episode. Mixture phases and the
/// upper/lower triangular choice are resolved with the rng.
MatrixClass curriculum_source(long episode, const Schedule& s, int m,
                              LogBase base, Rng& rng);

/// Schedule file: JSON list of {start, end, class, budget} with budget in
/// {half_n, n, nlogn, n_sq}.
std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);
Schedule load_schedule(const std::string& path);
void save_schedule(const std::string& path, const Schedule& s);

struct EnvConfig {
  int m = 8;
  int max_steps = 0;  // 0 -> 3 * m * m
  RewardSpec reward_spec;
  LogBase log_base = LogBase::natural;
};

/// One CNOT-minimization episode stream. Single-threaded; run several
/// instances for parallel collection.
class CnotEnv {
 public:
  CnotEnv(const EnvConfig& cfg, Schedule schedule, uint64_t seed);

  int m() const { return cfg_.m; }
  int observation_size() const { return cfg_.m * cfg_.m; }
  int num_actions() const { return action_count(cfg_.m); }
  int max_steps() const { return max_steps_; }
  long episode() const { return episode_; }
  long total_episodes() const { return schedule_total(schedule_); }
  const Schedule& schedule() const { return schedule_; }

  const BitMatrix& matrix() const { return matrix_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }
  const std::vector<CnotGate>& episode_gates() const { return gates_; }

  /// Advances to the next curriculum episode; resamples if the drawn matrix
  /// is already the identity.
  std::vector<double> reset();
  /// Starts an episode on a fixed matrix (evaluation); does not advance the
  /// curriculum counter.
  std::vector<double> reset_with(const BitMatrix& m);

  struct StepResult {
    double reward = 0.0;
    bool done = false;
    bool solved = false;
  };
  /// Throws std::logic_error if called after the episode ended.
  StepResult step(int action);

  std::vector<double> observation() const;
  void write_observation(double* out) const;

 private:
  EnvConfig cfg_;
  Schedule schedule_;
  Rng rng_;
  int max_steps_ = 0;
  long episode_ = -1;
  BitMatrix matrix_;
  int steps_ = 0;
  bool done_ = true;
  std::vector<CnotGate> gates_;
};

}  // namespace cnotsynth
