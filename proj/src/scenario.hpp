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
// Scenario documents: the declarative description of one campaign. JSON on
// disk with canonical (sorted-key) serialization; every referenced
// identifier is validated with a path-qualified error.

#ifndef ECHELON_SCENARIO_HPP_
#define ECHELON_SCENARIO_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "coalition.hpp"
#include "operational.hpp"
#include "strategic.hpp"
#include "tactical.hpp"
#include "tech.hpp"

namespace echelon {

inline constexpr int kSchemaVersion = 1;

enum class Echelon { kPolicy, kStrategic, kOperational, kTactical, kTechnical };

const std::string& to_string(Echelon e);
Echelon echelon_from_string(const std::string& name);

struct ScenarioMetadata {
  std::string name;
  std::string description;
  std::string notes;
  bool illustrative_numbers = false;
  std::vector<std::string> campaign_stages;
};

// v(S) = sum of singletons + pairwise_bonus * C(|S|, 2).
struct SynergyRule {
  std::map<std::string, double> singletons;
  double pairwise_bonus = 0.0;
};

struct CoalitionSection {
  std::vector<std::string> players;
  std::string defender;
  // Either an explicit subset table (keys are '+'-joined player names) or a
  // synergy rule; exactly one of the two.
  std::map<std::string, double> values;
  std::optional<SynergyRule> synergy;
  BudgetRule budget_rule;
};

struct StrategicSection {
  std::vector<std::string> operations;
  std::map<std::string, double> base_weights;
  double attacker_budget = 0.0;
  double grid_step = 1.0;
  bool allow_slack = false;
  std::map<std::string, ContestSpec> contests;
  double value_range_min = 0.0;  // normalization range for operational feedback
  double value_range_max = 1.0;
  double value_unit = 1.0;       // scales value_d into coalition units
  double weight_learning_rate = 0.0;  // eta_w in [0, 1]
  StrategicMethod method = StrategicMethod::kExactLp;
  std::int64_t fp_iterations = 100000;
};

struct OperationalTemplate {
  std::string deception;  // which deception mechanism this operation wires in
  std::vector<std::string> states;
  std::string initial_state;
  int horizon = 1;
  bool general_sum = false;
  std::vector<OperationalAction> actions_d;
  std::vector<OperationalAction> actions_a;
  // transition[state][action_d][action_a] -> sparse successor distribution.
  std::map<std::string,
           std::map<std::string, std::map<std::string, std::map<std::string, double>>>>
      transition;
  std::map<std::string, double> state_payoff;
  double context_payoff = 0.0;
};

struct TacticalSection {
  TacticCatalog catalog;
  TacticalRuleTable rules;
};

struct Thresholds {
  std::map<Echelon, double> defender;  // Theta_d per echelon
  std::map<Echelon, double> attacker;  // Theta_a per echelon
  std::set<Echelon> winning_echelons;  // nonempty, always contains policy
};

struct ShockSpec {
  std::string name;
  std::string site;  // perturbation path, e.g. "policy.budget"
  double delta = 0.0;
};

struct DeviationSection {
  std::set<Echelon> echelons;  // where dominance is evaluated
  bool strategic_all = true;   // enumerate every attacker allocation
  std::vector<Allocation> strategic_allocations;  // explicit list otherwise
};

struct SolverSettings {
  double eta = 0.5;
  double tolerance = 1e-6;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  double stability_epsilon = 1e-3;
};

struct Scenario {
  ScenarioMetadata metadata;
  CoalitionSection coalition;
  StrategicSection strategic;
  std::map<std::string, OperationalTemplate> operational;  // keyed by operation
  std::map<std::string, TacticalSection> tactical;         // keyed by operation
  TechLevel tech;
  Thresholds thresholds;
  std::vector<ShockSpec> shocks;
  DeviationSection deviations;
  SolverSettings solver;

  int defender_index() const;
  // Expands the values table or synergy rule into a bitmask-indexed game.
  CoalitionGame coalition_game() const;
};

// Parses and fully validates a scenario document. ParseError carries
// line/column; ValidationError carries the offending path and rule.
Scenario parse_scenario(const std::string& document);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
// parse_scenario(emit_scenario(s)) reproduces s structurally.
std::string emit_scenario(const Scenario& scenario);

bool operator==(const Scenario& a, const Scenario& b);

// A perturbation site addresses one numeric coordinate of the scenario:
//   policy.budget
//   policy.weights.<operation>
//   tech.theta.{budget_multiplier|contest_sharpness|context_payoff_shift}
//   tactical.<operation>.pair_payoff.<tactic_d>.<tactic_a>.{d|a}
//   operational.<operation>.transition.<state>.<action_d>.<action_a>.<state'>
struct PerturbationSite {
  enum class Kind {
    kPolicyBudget,
    kPolicyWeight,
    kTechBudgetMultiplier,
    kTechContestSharpness,
    kTechContextShift,
    kTacticalPairPayoff,
    kOperationalTransition,
  };
  Kind kind = Kind::kPolicyBudget;
  std::string operation;
  std::string key_a, key_b, key_c, key_d;
  bool defender_side = true;
};

// Resolves a site string against the scenario, validating every identifier.
PerturbationSite parse_site(const Scenario& scenario, const std::string& site);

// Applies `delta` at the site, persistently. Weight perturbations
// renormalize the simplex; transition perturbations renormalize the row;
// zero-sum tactical catalogs receive the antisymmetric (d, -d) version so
// the mode is preserved.
void apply_perturbation(Scenario& scenario, const PerturbationSite& site, double delta);

enum class TaxonomyCategory { kAsymmetric, kSymmetric, kEscalatory };
TaxonomyCategory taxonomy_category_from_string(const std::string& name);

// Scenario skeleton per taxonomy row: asymmetric (defender budget below the
// attacker's, unequal action costs), symmetric (mirrored payoffs
// everywhere), escalatory (K >= 3 with a monotone state-payoff ladder).
Scenario instantiate_template(TaxonomyCategory category);

// Flagship staged-campaign example: five operations across the campaign
// timeline with the four deception mechanisms wired into the operational
// games. Numbers are illustrative fixtures, flagged as such in metadata.
Scenario redcyber_scenario();

// Embedded fixtures: "minimal", "degenerate", "strategic-test",
// "decoy-sacrifice", "redcyber", "redcyber-small".
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace echelon

#endif  // ECHELON_SCENARIO_HPP_
