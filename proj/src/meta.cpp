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

#include "meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace echelon {
namespace {

constexpr double kEps = 1e-9;
constexpr double kSupportTol = 1e-12;

std::string alloc_key(const Allocation& alloc, double grid_step) {
  std::string key;
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(static_cast<long long>(std::llround(alloc[i] / grid_step)));
  }
  return key;
}

CoalitionGame coalition_with_value(const Scenario& scenario, double defender_value) {
  CoalitionGame game = scenario.coalition_game();
  game.value[1u << scenario.defender_index()] = defender_value;
  return game;
}

// Weighted-by-policy aggregate of the solved operations' values.
EchelonPayoffs operational_aggregate(const WarfareConfiguration& config) {
  EchelonPayoffs agg;
  for (const auto& [op, sol] : config.operational) {
    auto it = config.policy.weights.find(op);
    const double w = it == config.policy.weights.end() ? 0.0 : it->second;
    agg.defender += w * sol.cumulative_value_d;
    agg.attacker += w * sol.value_a[0][config.operational_specs.at(op).initial_state];
  }
  return agg;
}

// Worst defender encounter and best attacker encounter across every solved
// tactical game; the natural reading of threshold checks at this echelon.
EchelonPayoffs tactical_aggregate(const WarfareConfiguration& config) {
  EchelonPayoffs agg;
  bool any = false;
  for (const auto& [op, outcomes] : config.tactical)
    for (const auto& [pair, outcome] : outcomes) {
      if (!any) {
        agg.defender = outcome.U_dT;
        agg.attacker = outcome.U_aT;
        any = true;
      } else {
        agg.defender = std::min(agg.defender, outcome.U_dT);
        agg.attacker = std::max(agg.attacker, outcome.U_aT);
      }
    }
  return agg;
}

FeasibilityRule rule_for_pair(const Scenario& scenario, const std::string& op,
                              const std::string& action_d, const std::string& action_a) {
  auto section = scenario.tactical.find(op);
  if (section != scenario.tactical.end()) {
    auto it = section->second.rules.by_pair.find({action_d, action_a});
    if (it != section->second.rules.by_pair.end()) return it->second;
    if (section->second.rules.default_rule) return *section->second.rules.default_rule;
  }
  FeasibilityRule idle;
  idle.allowed_d = {kIdleTactic};
  idle.allowed_a = {kIdleTactic};
  idle.max_len_d = idle.max_len_a = 1;
  return idle;
}

const TacticCatalog& catalog_for(const Scenario& scenario, const std::string& op) {
  static const TacticCatalog empty;
  auto it = scenario.tactical.find(op);
  return it == scenario.tactical.end() ? empty : it->second.catalog;
}

int state_index(const OperationalTemplate& tmpl, const std::string& state) {
  return static_cast<int>(std::find(tmpl.states.begin(), tmpl.states.end(), state) -
                          tmpl.states.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// Mappings
// ---------------------------------------------------------------------------

StrategicGame ana_P_to_S(const PolicyOutcome& policy, const Scenario& scenario,
                         const TechLevel& tech,
                         const std::map<std::string, OperationFeedback>& feedback) {
  StrategicGame game;
  game.operations = scenario.strategic.operations;
  game.grid_step = scenario.strategic.grid_step;
  game.allow_slack = scenario.strategic.allow_slack;
  game.tech = tech;
  game.budget_a = scenario.strategic.attacker_budget;
  // The continuous policy budget buys whole grid units.
  game.budget_d =
      game.grid_step * std::floor(policy.budget / game.grid_step + kEps);
  for (const auto& op : game.operations) {
    auto w = policy.weights.find(op);
    game.weights.push_back(w == policy.weights.end() ? 0.0 : w->second);
    game.contests.push_back(scenario.strategic.contests.at(op));
  }
  game.overrides.resize(game.operations.size());
  for (std::size_t i = 0; i < game.operations.size(); ++i) {
    auto fb = feedback.find(game.operations[i]);
    if (fb != feedback.end())
      game.overrides[i] = ContestOverride{fb->second.anchor_value, fb->second.target};
  }
  return game;
}

CompiledOperations ana_S_to_O(const StrategicEquilibrium& strat, const Scenario& scenario,
                              const TechLevel& tech) {
  CompiledOperations out;
  for (std::size_t i = 0; i < scenario.strategic.operations.size(); ++i) {
    const std::string& op = scenario.strategic.operations[i];
    const double allocated = i < strat.mean_d.size() ? strat.mean_d[i] : 0.0;
    if (allocated <= kSupportTol) continue;  // unfunded operations stay dark

    const OperationalTemplate& tmpl = scenario.operational.at(op);
    const double per_stage_share = allocated / tmpl.horizon;

    std::vector<OperationalAction> actions_d;
    for (const auto& action : tmpl.actions_d) {
      if (action.cost > per_stage_share + kEps) continue;
      if (tech.action_mask_d && !tech.action_mask_d->count(action.id)) continue;
      actions_d.push_back(action);
    }
    std::vector<OperationalAction> actions_a;
    for (const auto& action : tmpl.actions_a) {
      if (tech.action_mask_a && !tech.action_mask_a->count(action.id)) continue;
      actions_a.push_back(action);
    }
    if (actions_d.empty() || actions_a.empty()) {
      std::ostringstream msg;
      msg << "NoFeasibleAction: operation '" << op << "' dropped (per-stage share "
          << per_stage_share << " affords no action)";
      out.diagnostics.push_back(msg.str());
      continue;
    }

    StochasticGameSpec spec;
    spec.states = tmpl.states;
    spec.actions_d = actions_d;
    spec.actions_a = actions_a;
    spec.horizon = tmpl.horizon;
    spec.general_sum = tmpl.general_sum;
    spec.deception_index = tmpl.deception;
    spec.tech = tech;
    spec.initial_state = state_index(tmpl, tmpl.initial_state);
    spec.context_payoff = tmpl.context_payoff + tech.context_payoff_shift;
    for (const auto& s : tmpl.states) spec.state_payoff.push_back(tmpl.state_payoff.at(s));
    spec.transition.assign(
        tmpl.states.size(),
        std::vector<std::vector<std::vector<double>>>(
            actions_d.size(), std::vector<std::vector<double>>(
                                  actions_a.size(),
                                  std::vector<double>(tmpl.states.size(), 0.0))));
    for (std::size_t s = 0; s < tmpl.states.size(); ++s)
      for (std::size_t ad = 0; ad < actions_d.size(); ++ad)
        for (std::size_t aa = 0; aa < actions_a.size(); ++aa) {
          const auto& row = tmpl.transition.at(tmpl.states[s])
                                .at(actions_d[ad].id)
                                .at(actions_a[aa].id);
          for (const auto& [target, p] : row)
            spec.transition[s][ad][aa][state_index(tmpl, target)] = p;
        }

    // Tactical pass: unfold every surviving encounter and fold the
    // equilibrium payoffs into the stage decomposition.
    TacticalOutcomeMap outcomes;
    for (const auto& ad : actions_d)
      for (const auto& aa : actions_a)
        outcomes[{ad.id, aa.id}] =
            solve_tactical(catalog_for(scenario, op), rule_for_pair(scenario, op, ad.id, aa.id));
    spec.tactical_term = cata_T_to_O(outcomes, actions_d, actions_a);

    out.tactical[op] = std::move(outcomes);
    out.specs[op] = std::move(spec);
  }
  return out;
}

std::map<std::string, OperationFeedback> cata_O_to_S(
    const std::map<std::string, OperationalSolution>& solutions,
    const StrategicEquilibrium& strat, const StrategicGame& game,
    const Scenario& scenario) {
  std::map<std::string, OperationFeedback> feedback;
  const double lo = scenario.strategic.value_range_min;
  const double hi = scenario.strategic.value_range_max;
  for (const auto& [op, sol] : solutions) {
    if (!scenario.operational.count(op))
      ThrowSolver("MissingOperation", "no operational template for '" + op + "'");
    const auto op_it =
        std::find(game.operations.begin(), game.operations.end(), op);
    const std::size_t i = op_it - game.operations.begin();
    OperationFeedback fb;
    // Raw contest level the equilibrium realizes for this operation.
    double realized = 0.0;
    for (const auto& [alloc_d, w_d] : strat.mix_d)
      for (const auto& [alloc_a, w_a] : strat.mix_a)
        realized += w_d * w_a *
                    contest_value(game.contests[i], alloc_d[i], alloc_a[i], game.tech);
    fb.anchor_value = realized;
    fb.target = std::clamp((sol.cumulative_value_d - lo) / (hi - lo), 0.0, 1.0);
    feedback[op] = fb;
  }
  return feedback;
}

PolicyFold cata_S_to_P(const StrategicEquilibrium& strat, const StrategicGame& game,
                       const Scenario& scenario,
                       const std::map<std::string, double>& current_weights) {
  PolicyFold fold;
  fold.defender_value = scenario.strategic.value_unit * strat.value_d;

  // Realized per-operation contribution under the equilibrium mixtures.
  std::vector<double> contribution(game.operations.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < game.operations.size(); ++i) {
    double expected = 0.0;
    for (const auto& [alloc_d, w_d] : strat.mix_d)
      for (const auto& [alloc_a, w_a] : strat.mix_a)
        expected += w_d * w_a * effective_contest(game, static_cast<int>(i), alloc_d[i],
                                                  alloc_a[i]);
    contribution[i] = game.weights[i] * expected;
    total += contribution[i];
  }

  const double eta_w = scenario.strategic.weight_learning_rate;
  double normalizer = 0.0;
  for (std::size_t i = 0; i < game.operations.size(); ++i) {
    const std::string& op = game.operations[i];
    auto it = current_weights.find(op);
    const double current = it == current_weights.end() ? 0.0 : it->second;
    const double share = total > kSupportTol ? contribution[i] / total : current;
    const double blended = (1.0 - eta_w) * current + eta_w * share;
    fold.weights[op] = blended;
    normalizer += blended;
  }
  if (normalizer <= kSupportTol)
    ThrowSolver("DegenerateWeights", "weight update collapsed the simplex");
  for (auto& [op, w] : fold.weights) w /= normalizer;
  return fold;
}

// ---------------------------------------------------------------------------
// The sweep
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void sweep_error(const char* echelon, const Error& cause) {
  throw Error(cause.error_class(), cause.code(),
              std::string("sweep aborted at the ") + echelon + " echelon: " + cause.what());
}

}  // namespace

WarfareConfiguration phi(const WarfareConfiguration& config, const Scenario& scenario) {
  WarfareConfiguration next;
  next.tech = config.tech;

  // Unfold: policy -> strategic.
  StrategicGame game = ana_P_to_S(config.policy, scenario, config.tech, config.feedback);
  StrategicEquilibrium strat;
  try {
    strat = solve_strategic(game, scenario.strategic.method, scenario.strategic.fp_iterations);
  } catch (const Error& e) {
    sweep_error("strategic", e);
  }

  // Unfold: strategic -> operational -> tactical, then solve upward.
  CompiledOperations compiled;
  try {
    compiled = ana_S_to_O(strat, scenario, config.tech);
  } catch (const Error& e) {
    sweep_error("operational", e);
  }
  next.diagnostics = compiled.diagnostics;
  next.tactical = std::move(compiled.tactical);
  next.operational_specs = std::move(compiled.specs);
  try {
    for (const auto& [op, spec] : next.operational_specs)
      next.operational[op] = solve_operational(spec);
  } catch (const Error& e) {
    sweep_error("operational", e);
  }

  // Fold: operational -> strategic (realized values), re-solve. Operations
  // left dark this sweep keep their last known evaluation; forgetting it
  // would refund an abandoned operation on the next sweep only to abandon
  // it again.
  next.feedback = config.feedback;
  for (auto& [op, fb] : cata_O_to_S(next.operational, strat, game, scenario))
    next.feedback[op] = fb;
  StrategicGame game2 = ana_P_to_S(config.policy, scenario, config.tech, next.feedback);
  try {
    next.strategic =
        solve_strategic(game2, scenario.strategic.method, scenario.strategic.fp_iterations);
  } catch (const Error& e) {
    sweep_error("strategic", e);
  }

  // Fold: strategic -> policy.
  PolicyFold fold = cata_S_to_P(next.strategic, game2, scenario, config.policy.weights);
  next.coalition_defender_value = fold.defender_value;
  CoalitionGame updated = coalition_with_value(scenario, fold.defender_value);
  try {
    next.policy = policy_equilibrium(updated, scenario.defender_index(), fold.weights,
                                     scenario.coalition.budget_rule, config.tech);
  } catch (const Error& e) {
    sweep_error("policy", e);
  }

  // Per-echelon payoff snapshot.
  const PayoffVector shapley = shapley_value(updated);
  next.payoffs[Echelon::kPolicy] = {
      shapley.shares[scenario.defender_index()],
      scenario.strategic.value_unit * (1.0 - next.strategic.value_d)};
  next.payoffs[Echelon::kStrategic] = {next.strategic.value_d, 1.0 - next.strategic.value_d};
  next.payoffs[Echelon::kOperational] = operational_aggregate(next);
  next.payoffs[Echelon::kTactical] = tactical_aggregate(next);
  next.payoffs[Echelon::kTechnical] = {0.0, 0.0};
  return next;
}

// ---------------------------------------------------------------------------
// Coordinates, damping, fixed point
// ---------------------------------------------------------------------------

std::map<std::string, double> coordinates(const WarfareConfiguration& config) {
  std::map<std::string, double> coords;
  coords["policy.budget"] = config.policy.budget;
  coords["policy.value"] = config.coalition_defender_value;
  for (const auto& [op, w] : config.policy.weights) coords["policy.weight." + op] = w;
  for (const auto& [op, fb] : config.feedback)
    coords["feedback." + op + ".anchor"] = fb.anchor_value;
  coords["strategic.value"] = config.strategic.value_d;
  for (const auto& [alloc, w] : config.strategic.mix_d)
    coords["strategic.mix_d." + alloc_key(alloc, config.strategic.grid_step)] = w;
  for (const auto& [alloc, w] : config.strategic.mix_a)
    coords["strategic.mix_a." + alloc_key(alloc, config.strategic.grid_step)] = w;
  for (std::size_t i = 0; i < config.strategic.mean_d.size(); ++i)
    coords["strategic.mean_d." + std::to_string(i)] = config.strategic.mean_d[i];
  for (std::size_t i = 0; i < config.strategic.mean_a.size(); ++i)
    coords["strategic.mean_a." + std::to_string(i)] = config.strategic.mean_a[i];
  for (const auto& [op, fb] : config.feedback) coords["feedback." + op + ".target"] = fb.target;
  for (const auto& [op, sol] : config.operational) {
    coords["operational." + op + ".value"] = sol.cumulative_value_d;
    for (std::size_t k = 0; k < sol.value_d.size(); ++k)
      for (std::size_t s = 0; s < sol.value_d[k].size(); ++s)
        coords["operational." + op + ".value." + std::to_string(k) + "." +
               std::to_string(s)] = sol.value_d[k][s];
  }
  for (const auto& [op, outcomes] : config.tactical)
    for (const auto& [pair, outcome] : outcomes) {
      const std::string base = "tactical." + op + "." + pair.first + "|" + pair.second;
      coords[base + ".d"] = outcome.U_dT;
      coords[base + ".a"] = outcome.U_aT;
    }
  for (const auto& [echelon, payoff] : config.payoffs) {
    coords["payoff." + to_string(echelon) + ".d"] = payoff.defender;
    coords["payoff." + to_string(echelon) + ".a"] = payoff.attacker;
  }
  return coords;
}

double coordinate_distance(const WarfareConfiguration& a, const WarfareConfiguration& b) {
  const auto ca = coordinates(a);
  const auto cb = coordinates(b);
  double sup = 0.0;
  for (const auto& [key, va] : ca) {
    auto it = cb.find(key);
    sup = std::max(sup, std::abs(va - (it == cb.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, vb] : cb)
    if (!ca.count(key)) sup = std::max(sup, std::abs(vb));
  return sup;
}

namespace {

// Damped update on the driver coordinates; everything downstream is taken
// from the fresh sweep. The budget is re-derived from the damped standalone
// value so the policy pair stays mutually consistent.
WarfareConfiguration damp_step(const WarfareConfiguration& current,
                               const WarfareConfiguration& fresh, double eta,
                               const Scenario& scenario) {
  WarfareConfiguration blended = fresh;

  // Weights: convex blend stays on the simplex; renormalize for drift.
  double wsum = 0.0;
  for (auto& [op, w] : blended.policy.weights) {
    auto it = current.policy.weights.find(op);
    const double old_w = it == current.policy.weights.end() ? 0.0 : it->second;
    w = (1.0 - eta) * old_w + eta * w;
    wsum += w;
  }
  for (auto& [op, w] : blended.policy.weights) w /= wsum;

  blended.coalition_defender_value = (1.0 - eta) * current.coalition_defender_value +
                                     eta * fresh.coalition_defender_value;
  CoalitionGame damped_game =
      coalition_with_value(scenario, blended.coalition_defender_value);
  blended.policy = policy_equilibrium(damped_game, scenario.defender_index(),
                                      blended.policy.weights,
                                      scenario.coalition.budget_rule, blended.tech);

  // Feedback targets and anchors blend when the operation survives.
  for (auto& [op, fb] : blended.feedback) {
    auto it = current.feedback.find(op);
    if (it == current.feedback.end()) continue;
    fb.target = (1.0 - eta) * it->second.target + eta * fb.target;
    fb.anchor_value = (1.0 - eta) * it->second.anchor_value + eta * fb.anchor_value;
  }

  // Mixed strategies blend in the union measure space.
  auto blend_mix = [eta](const std::vector<WeightedAllocation>& old_mix,
                         std::vector<WeightedAllocation>& new_mix, double grid) {
    std::map<std::string, WeightedAllocation> merged;
    for (const auto& entry : new_mix) {
      auto& slot = merged[alloc_key(entry.amounts, grid)];
      slot.amounts = entry.amounts;
      slot.weight += eta * entry.weight;
    }
    for (const auto& entry : old_mix) {
      auto& slot = merged[alloc_key(entry.amounts, grid)];
      if (slot.amounts.empty()) slot.amounts = entry.amounts;
      slot.weight += (1.0 - eta) * entry.weight;
    }
    new_mix.clear();
    for (auto& [key, entry] : merged)
      if (entry.weight > kSupportTol) new_mix.push_back(std::move(entry));
  };
  const bool same_shape =
      current.strategic.grid_step == fresh.strategic.grid_step &&
      current.strategic.mean_d.size() == fresh.strategic.mean_d.size();
  if (same_shape) {
    blend_mix(current.strategic.mix_d, blended.strategic.mix_d, fresh.strategic.grid_step);
    blend_mix(current.strategic.mix_a, blended.strategic.mix_a, fresh.strategic.grid_step);
    std::fill(blended.strategic.mean_d.begin(), blended.strategic.mean_d.end(), 0.0);
    std::fill(blended.strategic.mean_a.begin(), blended.strategic.mean_a.end(), 0.0);
    for (const auto& [alloc, w] : blended.strategic.mix_d)
      for (std::size_t i = 0; i < alloc.size(); ++i)
        blended.strategic.mean_d[i] += w * alloc[i];
    for (const auto& [alloc, w] : blended.strategic.mix_a)
      for (std::size_t i = 0; i < alloc.size(); ++i)
        blended.strategic.mean_a[i] += w * alloc[i];
  }
  return blended;
}

WarfareConfiguration initial_configuration(const Scenario& scenario) {
  WarfareConfiguration config;
  config.tech = scenario.tech;
  CoalitionGame game = scenario.coalition_game();
  config.coalition_defender_value = game.value[1u << scenario.defender_index()];
  config.policy =
      policy_equilibrium(game, scenario.defender_index(), scenario.strategic.base_weights,
                         scenario.coalition.budget_rule, scenario.tech);
  return config;
}

EquilibriumResult iterate_fixed_point(WarfareConfiguration config, const Scenario& scenario,
                                      double eta, double tolerance, int max_iterations) {
  if (eta <= 0.0 || eta > 1.0)
    ThrowValidation("solver.eta", "damping must lie in (0, 1]");
  if (tolerance <= 0.0) ThrowValidation("solver.tolerance", "must be positive");

  EquilibriumResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    WarfareConfiguration swept = phi(config, scenario);
    const double residual = coordinate_distance(config, swept);
    result.trace.iterations.push_back({residual, swept.payoffs});
    if (residual <= tolerance) {
      // The sweep we just ran is the undamped re-verification of the
      // fixed-point certificate.
      result.config = std::move(config);
      result.trace.converged = true;
      result.trace.final_residual = residual;
      return result;
    }
    config = damp_step(config, swept, eta, scenario);
  }
  result.config = std::move(config);
  result.trace.converged = false;
  result.trace.final_residual =
      result.trace.iterations.empty() ? 0.0 : result.trace.iterations.back().residual;
  return result;
}

}  // namespace

EquilibriumResult find_warfare_equilibrium(const Scenario& scenario, double eta,
                                           double tolerance, int max_iterations) {
  // Warm-up sweep populates every echelon before iterations are counted.
  WarfareConfiguration config = phi(initial_configuration(scenario), scenario);
  return iterate_fixed_point(std::move(config), scenario, eta, tolerance, max_iterations);
}

EquilibriumResult refine_warfare_equilibrium(const WarfareConfiguration& start,
                                             const Scenario& scenario, double eta,
                                             double tolerance, int max_iterations) {
  return iterate_fixed_point(start, scenario, eta, tolerance, max_iterations);
}

// ---------------------------------------------------------------------------
// Hylomorphism checks
// ---------------------------------------------------------------------------

double check_hylomorphism(const WarfareConfiguration& config, const Scenario& scenario,
                          HyloPair pair) {
  switch (pair) {
    case HyloPair::kPolicyStrategy: {
      // policy -> strategic game -> equilibrium -> folded policy.
      StrategicGame game = ana_P_to_S(config.policy, scenario, config.tech, config.feedback);
      StrategicEquilibrium strat =
          solve_strategic(game, scenario.strategic.method, scenario.strategic.fp_iterations);
      PolicyFold fold = cata_S_to_P(strat, game, scenario, config.policy.weights);
      PolicyOutcome folded = policy_equilibrium(
          coalition_with_value(scenario, fold.defender_value), scenario.defender_index(),
          fold.weights, scenario.coalition.budget_rule, config.tech);
      double sup = std::abs(folded.budget - config.policy.budget);
      for (const auto& [op, w] : folded.weights) {
        auto it = config.policy.weights.find(op);
        sup = std::max(sup, std::abs(w - (it == config.policy.weights.end() ? 0.0 : it->second)));
      }
      return sup;
    }
    case HyloPair::kStrategyOperation: {
      // strategic state -> operational games -> realized evaluations.
      CompiledOperations compiled = ana_S_to_O(config.strategic, scenario, config.tech);
      std::map<std::string, OperationalSolution> solutions;
      for (const auto& [op, spec] : compiled.specs) solutions[op] = solve_operational(spec);
      StrategicGame game = ana_P_to_S(config.policy, scenario, config.tech, config.feedback);
      auto feedback = cata_O_to_S(solutions, config.strategic, game, scenario);
      // Entries for operations the round trip does not reach (dark ones)
      // are carried state, not outputs; only refreshed evaluations count.
      double sup = 0.0;
      for (const auto& [op, fb] : feedback) {
        auto it = config.feedback.find(op);
        if (it == config.feedback.end()) {
          sup = std::max(sup, 1.0);
          continue;
        }
        sup = std::max(sup, std::abs(fb.target - it->second.target));
        sup = std::max(sup, std::abs(fb.anchor_value - it->second.anchor_value));
      }
      return sup;
    }
    case HyloPair::kOperationTactic: {
      // operational action pairs -> tactic sequences -> folded stage terms.
      double sup = 0.0;
      for (const auto& [op, outcomes] : config.tactical) {
        for (const auto& [actions, stored] : outcomes) {
          TacticalOutcome fresh = solve_tactical(
              catalog_for(scenario, op),
              rule_for_pair(scenario, op, actions.first, actions.second));
          sup = std::max(sup, std::abs(fresh.U_dT - stored.U_dT));
          sup = std::max(sup, std::abs(fresh.U_aT - stored.U_aT));
        }
      }
      return sup;
    }
    case HyloPair::kPolicyTactic: {
      // The complete round trip is one full sweep observed at the policy
      // echelon.
      WarfareConfiguration swept = phi(config, scenario);
      double sup = std::abs(swept.policy.budget - config.policy.budget);
      for (const auto& [op, w] : swept.policy.weights) {
        auto it = config.policy.weights.find(op);
        sup = std::max(sup, std::abs(w - (it == config.policy.weights.end() ? 0.0 : it->second)));
      }
      return sup;
    }
  }
  ThrowInternal("unknown hylomorphism pair");
}

// ---------------------------------------------------------------------------
// Perturbation propagation
// ---------------------------------------------------------------------------

PerturbationReport perturb_and_propagate(const WarfareConfiguration& config,
                                         const Scenario& scenario, const std::string& site,
                                         double delta, double eta, double tolerance,
                                         int max_iterations) {
  Scenario perturbed_scenario = scenario;
  apply_perturbation(perturbed_scenario, parse_site(scenario, site), delta);

  PerturbationReport report;
  EquilibriumResult rerun =
      refine_warfare_equilibrium(config, perturbed_scenario, eta, tolerance, max_iterations);
  report.reconverged = rerun.trace.converged;
  report.iterations = static_cast<int>(rerun.trace.iterations.size());
  report.trace = rerun.trace;
  for (const auto& [echelon, payoff] : rerun.config.payoffs) {
    auto it = config.payoffs.find(echelon);
    EchelonPayoffs base = it == config.payoffs.end() ? EchelonPayoffs{} : it->second;
    report.deltas[echelon] = {payoff.defender - base.defender,
                              payoff.attacker - base.attacker};
  }
  report.perturbed = std::move(rerun.config);
  return report;
}

// ---------------------------------------------------------------------------
// Assessment
// ---------------------------------------------------------------------------

namespace {

// Attacker's best response value against the defender's fixed stage
// policies, by backward induction over pure attacker choices.
double attacker_best_response_value(const StochasticGameSpec& spec,
                                    const OperationalSolution& sol) {
  const int K = spec.horizon;
  const int s_count = spec.n_states();
  std::vector<std::vector<double>> value(K + 1, std::vector<double>(s_count, 0.0));
  for (int k = K - 1; k >= 0; --k) {
    for (int s = 0; s < s_count; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int aa = 0; aa < spec.n_actions_a(); ++aa) {
        double v = 0.0;
        for (int ad = 0; ad < spec.n_actions_d(); ++ad) {
          const double pd = sol.policy_d[k][s].weights[ad];
          if (pd <= 0.0) continue;
          double stage = spec.general_sum ? stage_payoff_attacker(spec, s, ad, aa)
                                          : -stage_payoff(spec, s, ad, aa);
          const auto& row = spec.transition[s][ad][aa];
          for (int t = 0; t < s_count; ++t) stage += row[t] * value[k + 1][t];
          v += pd * stage;
        }
        best = std::max(best, v);
      }
      value[k][s] = best;
    }
  }
  return value[0][spec.initial_state];
}

std::string format_payoff(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

AssessmentResult assess(const EquilibriumResult& result, const Scenario& scenario) {
  if (!result.trace.converged)
    ThrowSolver("NotConverged", "assessment requires a converged configuration");
  const WarfareConfiguration& config = result.config;
  AssessmentResult verdicts;

  // Stability: every declared shock must re-converge close to home.
  bool stable = true;
  for (const auto& shock : scenario.shocks) {
    Scenario shocked = scenario;
    apply_perturbation(shocked, parse_site(scenario, shock.site), shock.delta);
    EquilibriumResult rerun =
        refine_warfare_equilibrium(config, shocked, scenario.solver.eta,
                                   scenario.solver.tolerance, scenario.solver.max_iterations);
    const double displacement = coordinate_distance(config, rerun.config);
    const bool held = rerun.trace.converged &&
                      displacement <= scenario.solver.stability_epsilon;
    stable = stable && held;
    verdicts.evidence.push_back("shock '" + shock.name + "': " +
                                (rerun.trace.converged ? "reconverged" : "diverged") +
                                ", displacement " + format_payoff(displacement));
  }
  if (scenario.shocks.empty())
    verdicts.evidence.push_back("stability: no declared shocks; vacuously stable");
  verdicts.stable = stable;

  // Dominance: defender payoff at least matches the attacker's best
  // deviation payoff at every echelon in scope.
  bool dominant = true;
  for (const Echelon echelon : scenario.deviations.echelons) {
    double attacker_best = -std::numeric_limits<double>::infinity();
    double defender_payoff = config.payoffs.count(echelon)
                                 ? config.payoffs.at(echelon).defender
                                 : 0.0;
    switch (echelon) {
      case Echelon::kStrategic: {
        StrategicGame game =
            ana_P_to_S(config.policy, scenario, config.tech, config.feedback);
        std::vector<Allocation> deviations =
            scenario.deviations.strategic_all
                ? enumerate_allocations(game.budget_a, game.grid_step, game.n_ops(),
                                        game.allow_slack)
                : scenario.deviations.strategic_allocations;
        for (const auto& attacker : deviations) {
          double value = 0.0;
          for (const auto& [alloc, w] : config.strategic.mix_d)
            value += w * strategic_payoff(game, alloc, attacker).first;
          attacker_best = std::max(attacker_best, 1.0 - value);
        }
        break;
      }
      case Echelon::kOperational: {
        attacker_best = 0.0;
        for (const auto& [op, sol] : config.operational) {
          auto w = config.policy.weights.find(op);
          attacker_best += (w == config.policy.weights.end() ? 0.0 : w->second) *
                           attacker_best_response_value(config.operational_specs.at(op), sol);
        }
        break;
      }
      case Echelon::kTactical: {
        for (const auto& [op, outcomes] : config.tactical)
          for (const auto& [actions, outcome] : outcomes) {
            BimatrixGame encounter;
            auto seqs = ana_O_to_T(
                scenario.tactical.count(op) ? scenario.tactical.at(op).rules
                                            : TacticalRuleTable{},
                actions.first, actions.second);
            const auto& catalog = catalog_for(scenario, op);
            encounter.payoff_d.assign(seqs.first.size(),
                                      std::vector<double>(seqs.second.size()));
            encounter.payoff_a = encounter.payoff_d;
            for (std::size_t i = 0; i < seqs.first.size(); ++i)
              for (std::size_t j = 0; j < seqs.second.size(); ++j) {
                auto [ud, ua] = sequence_payoff(catalog, seqs.first[i], seqs.second[j]);
                encounter.payoff_d[i][j] = ud;
                encounter.payoff_a[i][j] = ua;
              }
            EquilibriumProfile profile = solve_bimatrix(encounter);
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < seqs.second.size(); ++j) {
              double v = 0.0;
              for (std::size_t i = 0; i < seqs.first.size(); ++i)
                v += profile.strategy_d.weights[i] * encounter.payoff_a[i][j];
              best = std::max(best, v);
            }
            attacker_best = std::max(attacker_best, best);
          }
        break;
      }
      case Echelon::kPolicy:
      case Echelon::kTechnical:
        // No deviation machinery at these echelons: compare payoffs head on.
        attacker_best = config.payoffs.count(echelon)
                            ? config.payoffs.at(echelon).attacker
                            : 0.0;
        break;
    }
    const bool held = defender_payoff >= attacker_best - kEps;
    dominant = dominant && held;
    verdicts.evidence.push_back("dominance at " + to_string(echelon) + ": defender " +
                                format_payoff(defender_payoff) + " vs attacker best " +
                                format_payoff(attacker_best));
  }
  if (scenario.deviations.echelons.empty())
    verdicts.evidence.push_back("dominance: no declared deviation set; vacuously dominant");
  verdicts.dominant = dominant;

  // Winning: thresholds at every declared echelon.
  bool winning = true;
  for (const Echelon echelon : scenario.thresholds.winning_echelons) {
    const EchelonPayoffs payoff =
        config.payoffs.count(echelon) ? config.payoffs.at(echelon) : EchelonPayoffs{};
    const double theta_d = scenario.thresholds.defender.count(echelon)
                               ? scenario.thresholds.defender.at(echelon)
                               : -std::numeric_limits<double>::infinity();
    const double theta_a = scenario.thresholds.attacker.count(echelon)
                               ? scenario.thresholds.attacker.at(echelon)
                               : std::numeric_limits<double>::infinity();
    const bool held = payoff.defender >= theta_d && payoff.attacker <= theta_a;
    winning = winning && held;
    verdicts.evidence.push_back("winning at " + to_string(echelon) + ": defender " +
                                format_payoff(payoff.defender) + " vs threshold " +
                                format_payoff(theta_d) + ", attacker " +
                                format_payoff(payoff.attacker) + " vs threshold " +
                                format_payoff(theta_a));
  }
  verdicts.winning = winning;

  // A battle lost while the war is won: some tactical encounter fell below
  // the defender's tactical threshold, yet the winning verdict held.
  if (scenario.thresholds.defender.count(Echelon::kTactical)) {
    const double theta_t = scenario.thresholds.defender.at(Echelon::kTactical);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [op, outcomes] : config.tactical)
      for (const auto& [actions, outcome] : outcomes) worst = std::min(worst, outcome.U_dT);
    if (worst < theta_t && winning) {
      verdicts.lose_battle_win_war = true;
      verdicts.evidence.push_back("lose-battle-win-war: worst tactical payoff " +
                                  format_payoff(worst) + " is below the threshold " +
                                  format_payoff(theta_t) + " while the war is won");
    }
  }
  return verdicts;
}

std::map<std::string, std::vector<Trajectory>> simulate_operations(
    const WarfareConfiguration& config, std::uint64_t seed, int trajectories) {
  if (trajectories < 1)
    ThrowValidation("simulate.trajectories", "must be >= 1");
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::map<std::string, std::vector<Trajectory>> out;
  std::uint64_t op_index = 0;
  for (const auto& [op, sol] : config.operational) {
    std::vector<Trajectory>& list = out[op];
    list.reserve(trajectories);
    for (int t = 0; t < trajectories; ++t)
      list.push_back(simulate(config.operational_specs.at(op), sol,
                              splitmix(seed ^ splitmix(op_index) ^ (0x100000001ULL * t))));
    ++op_index;
  }
  return out;
}

}  // namespace echelon
