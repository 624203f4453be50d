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
//
// Cross-echelon coupling: the unfold/fold mappings between adjacent
// echelons, the composed sweep operator, the damped fixed-point search for
// the warfare equilibrium, round-trip consistency checks, perturbation
// propagation, and the stability/dominance/winning verdicts.

#ifndef ECHELON_META_HPP_
#define ECHELON_META_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "scenario.hpp"

namespace echelon {

// Realized per-operation outcome folded back into the strategic game: the
// operation's normalized cumulative value pinned at the contest level the
// equilibrium realized (the expected raw contest under its mixtures).
struct OperationFeedback {
  double anchor_value = 0.5;
  double target = 0.5;
};

struct EchelonPayoffs {
  double defender = 0.0;
  double attacker = 0.0;
};

using TacticalOutcomeMap = std::map<std::pair<std::string, std::string>, TacticalOutcome>;

// The full cross-echelon state E: per-echelon equilibria plus the coupling
// tables that tie them together.
struct WarfareConfiguration {
  PolicyOutcome policy;
  double coalition_defender_value = 0.0;  // v({defender}) currently in force
  StrategicEquilibrium strategic;
  std::map<std::string, StochasticGameSpec> operational_specs;
  std::map<std::string, OperationalSolution> operational;
  std::map<std::string, TacticalOutcomeMap> tactical;
  TechLevel tech;
  std::map<std::string, OperationFeedback> feedback;  // f per operation
  std::map<Echelon, EchelonPayoffs> payoffs;
  std::vector<std::string> diagnostics;  // dropped operations and the like
};

struct TraceEntry {
  double residual = 0.0;
  std::map<Echelon, EchelonPayoffs> payoffs;
};

struct ConvergenceTrace {
  std::vector<TraceEntry> iterations;
  bool converged = false;
  double final_residual = 0.0;
};

struct EquilibriumResult {
  WarfareConfiguration config;
  ConvergenceTrace trace;
};

// ---------------------------------------------------------------------------
// Unfold / fold mappings between adjacent echelons
// ---------------------------------------------------------------------------

// Policy state to strategic game, with any realized-outcome feedback
// installed as contest overrides. The policy budget is floored to the grid.
StrategicGame ana_P_to_S(const PolicyOutcome& policy, const Scenario& scenario,
                         const TechLevel& tech,
                         const std::map<std::string, OperationFeedback>& feedback);

struct CompiledOperations {
  std::map<std::string, StochasticGameSpec> specs;
  std::map<std::string, TacticalOutcomeMap> tactical;
  std::vector<std::string> diagnostics;
};

// Strategic allocations to operational games: every operation with positive
// mean defender allocation is instantiated from its template, defender
// actions filtered by per-stage affordability, and the tactical echelon
// solved for every surviving action pair. Starved operations are dropped
// with a diagnostic.
CompiledOperations ana_S_to_O(const StrategicEquilibrium& strat, const Scenario& scenario,
                              const TechLevel& tech);

// Operational equilibrium values to the strategic evaluation table,
// normalized by the scenario's declared payoff range and anchored at the
// raw contest level the producing equilibrium realized.
std::map<std::string, OperationFeedback> cata_O_to_S(
    const std::map<std::string, OperationalSolution>& solutions,
    const StrategicEquilibrium& strat, const StrategicGame& game,
    const Scenario& scenario);

struct PolicyFold {
  double defender_value = 0.0;               // updated v({defender})
  std::map<std::string, double> weights;     // eta_w-blended objective weights
};

// Strategic equilibrium back to policy inputs: the defender's standalone
// coalition value and the realized-contribution weight update.
PolicyFold cata_S_to_P(const StrategicEquilibrium& strat, const StrategicGame& game,
                       const Scenario& scenario,
                       const std::map<std::string, double>& current_weights);

// ---------------------------------------------------------------------------
// The composed sweep and the fixed-point search
// ---------------------------------------------------------------------------

// One full sweep: unfold policy through strategy, operations and tactics,
// fold the results back up, and finish with the policy update. Aborts with
// the failing echelon named on solver errors.
WarfareConfiguration phi(const WarfareConfiguration& config, const Scenario& scenario);

// Flat numeric view of a configuration; residuals and stability distances
// are sup-norms over the union of keys (absent keys read as 0).
std::map<std::string, double> coordinates(const WarfareConfiguration& config);
double coordinate_distance(const WarfareConfiguration& a, const WarfareConfiguration& b);

// Damped iteration x <- (1-eta) x + eta phi(x) on the driver coordinates
// (weights, standalone value, feedback, mixtures). The residual is the
// undamped sweep change sup|phi(x) - x|, so a converged result certifies
// the fixed point at the stated tolerance.
EquilibriumResult find_warfare_equilibrium(const Scenario& scenario, double eta,
                                           double tolerance, int max_iterations);

// Same iteration warm-started from an existing configuration (used by
// perturbation propagation and stability probing).
EquilibriumResult refine_warfare_equilibrium(const WarfareConfiguration& start,
                                             const Scenario& scenario, double eta,
                                             double tolerance, int max_iterations);

enum class HyloPair { kPolicyStrategy, kStrategyOperation, kOperationTactic, kPolicyTactic };

// Applies the named round trip from the upper echelon's stored state and
// returns the sup-norm change it would induce; ~0 at a warfare equilibrium.
double check_hylomorphism(const WarfareConfiguration& config, const Scenario& scenario,
                          HyloPair pair);

// ---------------------------------------------------------------------------
// Perturbation propagation and assessment
// ---------------------------------------------------------------------------

struct PerturbationReport {
  std::map<Echelon, EchelonPayoffs> deltas;  // perturbed minus original
  bool reconverged = false;
  int iterations = 0;
  ConvergenceTrace trace;
  WarfareConfiguration perturbed;
};

// Applies `delta` at `site` (persistently, to a copy of the scenario),
// re-runs the fixed-point search from the given equilibrium, and reports
// signed payoff deltas at every echelon.
PerturbationReport perturb_and_propagate(const WarfareConfiguration& config,
                                         const Scenario& scenario, const std::string& site,
                                         double delta, double eta, double tolerance,
                                         int max_iterations);

struct AssessmentResult {
  bool stable = false;
  bool dominant = false;
  bool winning = false;
  bool lose_battle_win_war = false;
  std::vector<std::string> evidence;
};

// Stability against the scenario's declared shock set, dominance against the
// declared attacker deviation sets, and threshold-based winning. Requires a
// converged configuration (NotConverged otherwise).
AssessmentResult assess(const EquilibriumResult& result, const Scenario& scenario);

// Seeded trajectory simulation across every solved operation; trajectory t
// of operation i uses a splitmix-derived stream so batches are reproducible
// and order-independent.
std::map<std::string, std::vector<Trajectory>> simulate_operations(
    const WarfareConfiguration& config, std::uint64_t seed, int trajectories);

}  // namespace echelon

#endif  // ECHELON_META_HPP_
