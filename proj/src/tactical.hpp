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

#ifndef ECHELON_TACTICAL_HPP_
#define ECHELON_TACTICAL_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "operational.hpp"

namespace echelon {

// Reserved tactic identifier used to pad the shorter sequence when two
// sequences of different length are paired. Catalogs may configure idle
// payoffs; the default contribution is (0, 0).
inline const std::string kIdleTactic = "idle";

using TacticSequence = std::vector<std::string>;
using TacticPair = std::pair<std::string, std::string>;

struct TacticCatalog {
  std::vector<std::string> tactics_d;
  std::vector<std::string> tactics_a;
  // Total on tactics_d x tactics_a.
  std::map<TacticPair, std::pair<double, double>> pair_payoff;
  double step_discount = 1.0;  // gamma in (0, 1]
  // Payoffs of (tactic, idle) and (idle, tactic) pairs; default (0, 0).
  std::map<std::string, std::pair<double, double>> idle_payoff_d;
  std::map<std::string, std::pair<double, double>> idle_payoff_a;
};

enum class Repetition { kAllowed, kForbidden };

// Feasible tactic sequences for one operational action pair.
struct FeasibilityRule {
  std::vector<std::string> allowed_d;
  std::vector<std::string> allowed_a;
  int max_len_d = 1;
  int max_len_a = 1;
  Repetition repetition = Repetition::kForbidden;
};

struct TacticalRuleTable {
  std::map<std::pair<std::string, std::string>, FeasibilityRule> by_pair;
  std::optional<FeasibilityRule> default_rule;
};

struct TacticalOutcome {
  TacticSequence xi_d;
  TacticSequence xi_a;
  double U_dT = 0.0;
  double U_aT = 0.0;
  double epsilon = 0.0;
};

// All sequences of length 1..max_len over the allowed set in shortlex order
// (by length, then lexicographic). Throws EnumerationCapExceeded when the
// closed-form count exceeds the kernel cap.
std::vector<TacticSequence> enumerate_sequences(const std::vector<std::string>& allowed,
                                                int max_len, Repetition repetition);

// Stepwise discounted payoff; the shorter sequence is padded with the idle
// tactic. Throws UnknownTactic for identifiers outside the catalog.
std::pair<double, double> sequence_payoff(const TacticCatalog& catalog,
                                          const TacticSequence& xi_d,
                                          const TacticSequence& xi_a);

// Bimatrix equilibrium over all feasible sequence pairs; mixed equilibria
// report the expected payoffs together with the lexicographically-first
// supported pure pair.
TacticalOutcome solve_tactical(const TacticCatalog& catalog, const FeasibilityRule& rule);

// Unfolds one operational action pair into its feasible sequence sets. An
// absent pair falls back to the table default, then to the idle singleton.
std::pair<std::vector<TacticSequence>, std::vector<TacticSequence>> ana_O_to_T(
    const TacticalRuleTable& table, const std::string& action_d,
    const std::string& action_a);

// Folds per-pair tactical outcomes into the stochastic game's tactical_term
// table, aligned with the given operational action lists.
std::vector<std::vector<std::pair<double, double>>> cata_T_to_O(
    const std::map<std::pair<std::string, std::string>, TacticalOutcome>& outcomes,
    const std::vector<OperationalAction>& actions_d,
    const std::vector<OperationalAction>& actions_a);

}  // namespace echelon

#endif  // ECHELON_TACTICAL_HPP_
