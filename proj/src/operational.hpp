// Copyright 2026 The Echelon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ECHELON_OPERATIONAL_HPP_
#define ECHELON_OPERATIONAL_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "game_kernel.hpp"
#include "tech.hpp"

namespace echelon {

struct OperationalAction {
  std::string id;
  double cost = 0.0;
};

// Finite-horizon two-player stochastic game for one operation. The stage
// payoff decomposes as tactical_term + state term + context term; the
// attacker's stage payoff is the tactical term's second component minus the
// state and context terms (exact negation in the zero-sum case, where the
// tactical term itself must be mirrored).
struct StochasticGameSpec {
  std::vector<std::string> states;
  std::vector<OperationalAction> actions_d;
  std::vector<OperationalAction> actions_a;
  int horizon = 1;  // number of stages K, 1..64
  // transition[s][ad][aa] is a probability row over successor states.
  std::vector<std::vector<std::vector<std::vector<double>>>> transition;
  std::vector<double> state_payoff;  // u_d per state
  double context_payoff = 0.0;       // exogenous per-stage term (deception/tech)
  // tactical_term[ad][aa] = (defender, attacker) equilibrium payoffs fed
  // back from the tactical echelon.
  std::vector<std::vector<std::pair<double, double>>> tactical_term;
  std::string deception_index;  // which deception mechanism this game wires in
  TechLevel tech;               // already folded into the numeric fields
  int initial_state = 0;
  bool general_sum = false;

  int n_states() const { return static_cast<int>(states.size()); }
  int n_actions_d() const { return static_cast<int>(actions_d.size()); }
  int n_actions_a() const { return static_cast<int>(actions_a.size()); }
};

inline constexpr int kMaxHorizon = 64;

// policy[k][s] is the acting player's mixed action at stage k in state s.
using StagePolicy = std::vector<std::vector<MixedStrategy>>;

struct OperationalSolution {
  StagePolicy policy_d;
  StagePolicy policy_a;
  // value_*[k][s] for k = 0..K; row K is the all-zero terminal convention.
  std::vector<std::vector<double>> value_d;
  std::vector<std::vector<double>> value_a;
  double cumulative_value_d = 0.0;  // value_d[0][initial_state]
};

struct TrajectoryStep {
  int stage = 0;
  int state = 0;
  int action_d = 0;
  int action_a = 0;
  double payoff_d = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  double total_payoff_d = 0.0;
};

// Three-term stage payoff for the defender; IndexOutOfRange on bad indices.
double stage_payoff(const StochasticGameSpec& spec, int state, int action_d,
                    int action_a);
double stage_payoff_attacker(const StochasticGameSpec& spec, int state, int action_d,
                             int action_a);

// Backward induction from the terminal stage; each (k, s) stage game is
// solved with the zero-sum LP (or the bimatrix kernel when general_sum).
OperationalSolution solve_operational(const StochasticGameSpec& spec);

// Largest deviation found when re-verifying the recorded values against
// freshly rebuilt stage games; ~0 for a sound solution.
double verify_solution(const StochasticGameSpec& spec, const OperationalSolution& sol);

// Seeded sampling of one play-through; identical seeds give bit-identical
// trajectories.
Trajectory simulate(const StochasticGameSpec& spec, const OperationalSolution& sol,
                    std::uint64_t seed);

}  // namespace echelon

#endif  // ECHELON_OPERATIONAL_HPP_
