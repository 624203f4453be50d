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
// Taxonomy templates and the embedded example scenarios.

#include <cmath>

#include "errors.hpp"
#include "scenario.hpp"

namespace echelon {
namespace {

using Row = std::map<std::string, double>;

void set_row(OperationalTemplate& t, const std::string& s, const std::string& ad,
             const std::string& aa, Row row) {
  t.transition[s][ad][aa] = std::move(row);
}

// Fills every missing (state, action, action) row with a self-loop.
void default_self_loops(OperationalTemplate& t) {
  for (const auto& s : t.states)
    for (const auto& ad : t.actions_d)
      for (const auto& aa : t.actions_a) {
        auto& by_d = t.transition[s];
        if (!by_d[ad.id].count(aa.id)) by_d[ad.id][aa.id] = Row{{s, 1.0}};
      }
}

// One-state, one-action-per-side operation whose stage value is
// state_payoff + context + the tactical term of its single encounter.
OperationalTemplate trivial_operation(const std::string& deception, double state_payoff,
                                      double context) {
  OperationalTemplate t;
  t.deception = deception;
  t.states = {"steady"};
  t.initial_state = "steady";
  t.horizon = 1;
  t.actions_d = {{"hold", 0.0}};
  t.actions_a = {{"press", 0.0}};
  t.state_payoff["steady"] = state_payoff;
  t.context_payoff = context;
  default_self_loops(t);
  return t;
}

// Single mirrored tactic pair worth (value, -value) for every encounter.
TacticalSection single_pair_tactics(double value) {
  TacticalSection section;
  section.catalog.tactics_d = {"hold_line"};
  section.catalog.tactics_a = {"push_line"};
  section.catalog.pair_payoff[{"hold_line", "push_line"}] = {value, -value};
  FeasibilityRule rule;
  rule.allowed_d = {"hold_line"};
  rule.allowed_a = {"push_line"};
  rule.max_len_d = rule.max_len_a = 1;
  section.rules.default_rule = rule;
  return section;
}

void zero_sum_pairs(TacticCatalog& catalog,
                    const std::vector<std::vector<double>>& defender_payoffs) {
  for (std::size_t i = 0; i < catalog.tactics_d.size(); ++i)
    for (std::size_t j = 0; j < catalog.tactics_a.size(); ++j) {
      const double v = defender_payoffs[i][j];
      catalog.pair_payoff[{catalog.tactics_d[i], catalog.tactics_a[j]}] = {v, -v};
    }
}

FeasibilityRule simple_rule(const std::vector<std::string>& d,
                            const std::vector<std::string>& a, int len_d = 1,
                            int len_a = 1) {
  FeasibilityRule rule;
  rule.allowed_d = d;
  rule.allowed_a = a;
  rule.max_len_d = len_d;
  rule.max_len_a = len_a;
  rule.repetition = Repetition::kForbidden;
  return rule;
}

Thresholds vacuous_thresholds() {
  Thresholds t;
  t.winning_echelons = {Echelon::kPolicy};
  return t;
}

// --------------------------------------------------------------------------
// Embedded fixtures
// --------------------------------------------------------------------------

Scenario minimal_scenario() {
  Scenario s;
  s.metadata.name = "minimal";
  s.metadata.description = "Smallest valid campaign: one player, one operation, "
                           "one state, one tactic per side.";
  s.coalition.players = {"solo"};
  s.coalition.defender = "solo";
  s.coalition.values = {{"solo", 0.5}};
  s.coalition.budget_rule = {0.5, 1.0};

  s.strategic.operations = {"op"};
  s.strategic.base_weights = {{"op", 1.0}};
  s.strategic.attacker_budget = 1.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"op", {ContestKind::kLottery, 1.0}}};
  s.strategic.value_range_min = 0.0;
  s.strategic.value_range_max = 2.0;

  s.operational["op"] = trivial_operation("none", 0.5, 0.0);
  s.tactical["op"] = single_pair_tactics(0.5);
  s.thresholds = vacuous_thresholds();
  s.deviations.echelons = {Echelon::kStrategic};
  return s;
}

// Constant map: every sweep reproduces the configuration exactly, so the
// fixed point is reached with residual 0.
Scenario degenerate_scenario() {
  Scenario s;
  s.metadata.name = "degenerate";
  s.metadata.description = "Constant-map fixture: one operation, tied contests, a "
                           "single dominant tactic; the sweep is the identity.";
  s.coalition.players = {"command"};
  s.coalition.defender = "command";
  s.coalition.values = {{"command", 0.5}};
  s.coalition.budget_rule = {1.0, 2.0};  // budget = 1 + 2 * 0.5 = 2

  s.strategic.operations = {"main"};
  s.strategic.base_weights = {{"main", 1.0}};
  s.strategic.attacker_budget = 2.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"main", {ContestKind::kWinnerTakeAll, 1.0}}};
  s.strategic.value_range_min = 0.0;
  s.strategic.value_range_max = 2.0;

  s.operational["main"] = trivial_operation("none", 0.5, 0.0);
  s.tactical["main"] = single_pair_tactics(0.5);

  s.thresholds = vacuous_thresholds();
  s.thresholds.defender[Echelon::kPolicy] = 0.2;
  s.thresholds.attacker[Echelon::kPolicy] = 0.9;
  s.shocks.push_back({"budget-nudge", "policy.budget", 0.1});
  s.deviations.echelons = {Echelon::kStrategic};
  s.solver.stability_epsilon = 0.25;
  return s;
}

// Pure Blotto fixture: the operational echelon is deliberately starved (every
// defender action costs more than any feasible allocation), so no feedback
// reaches the strategic game and its value is the plain contest value.
Scenario strategic_test_scenario() {
  Scenario s;
  s.metadata.name = "strategic-test";
  s.metadata.description = "Two winner-take-all fields, budgets 3 vs 3; "
                           "operations are under-resourced on purpose so the "
                           "strategic game stays a pure allocation contest.";
  s.coalition.players = {"hq"};
  s.coalition.defender = "hq";
  s.coalition.values = {{"hq", 1.0}};
  s.coalition.budget_rule = {3.0, 0.0};  // constant budget 3

  s.strategic.operations = {"north", "south"};
  s.strategic.base_weights = {{"north", 0.5}, {"south", 0.5}};
  s.strategic.attacker_budget = 3.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"north", {ContestKind::kWinnerTakeAll, 1.0}},
                          {"south", {ContestKind::kWinnerTakeAll, 1.0}}};
  s.strategic.value_range_min = 0.0;
  s.strategic.value_range_max = 2.0;

  for (const std::string op : {"north", "south"}) {
    OperationalTemplate t = trivial_operation("none", 0.0, 0.0);
    t.actions_d = {{"commit", 999.0}};  // never affordable
    t.transition.clear();
    default_self_loops(t);
    s.operational[op] = t;
  }
  s.thresholds = vacuous_thresholds();
  s.thresholds.defender[Echelon::kPolicy] = -100.0;
  s.thresholds.attacker[Echelon::kPolicy] = 100.0;
  s.shocks.push_back({"budget-plus-one", "policy.budget", 1.0});
  s.deviations.echelons = {Echelon::kStrategic};
  return s;
}

// A battle lost on purpose: the equilibrium encounter sacrifices a decoy
// (tactical payoff -1) yet the policy verdict stays winning.
Scenario decoy_sacrifice_scenario() {
  Scenario s;
  s.metadata.name = "decoy-sacrifice";
  s.metadata.description = "The defender feeds the attacker a decoy: the tactical "
                           "encounter is lost by design while the campaign-level "
                           "verdict stays favorable.";
  s.coalition.players = {"defense_bloc"};
  s.coalition.defender = "defense_bloc";
  s.coalition.values = {{"defense_bloc", 0.5}};
  s.coalition.budget_rule = {2.0, 0.0};

  s.strategic.operations = {"campaign"};
  s.strategic.base_weights = {{"campaign", 1.0}};
  s.strategic.attacker_budget = 2.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"campaign", {ContestKind::kWinnerTakeAll, 1.0}}};
  s.strategic.value_range_min = 0.0;
  s.strategic.value_range_max = 2.0;

  OperationalTemplate op;
  op.deception = "decoy_credentials";
  op.states = {"field"};
  op.initial_state = "field";
  op.horizon = 1;
  op.actions_d = {{"deploy_decoy", 0.0}, {"guard", 0.0}};
  op.actions_a = {{"take_bait", 0.0}, {"bypass", 0.0}};
  op.state_payoff = {{"field", 0.0}};
  op.context_payoff = 2.0;
  default_self_loops(op);
  s.operational["campaign"] = op;

  TacticalSection tac;
  tac.catalog.tactics_d = {"sacrifice_asset", "hold_back", "set_trap", "patrol"};
  tac.catalog.tactics_a = {"loot_decoy", "probe_edge"};
  zero_sum_pairs(tac.catalog, {{-1.0, 0.0},    // sacrifice_asset
                               {0.0, 0.0},     // hold_back
                               {-1.5, 0.0},    // set_trap
                               {0.0, 1.0}});   // patrol
  tac.rules.by_pair[{"deploy_decoy", "take_bait"}] =
      simple_rule({"sacrifice_asset"}, {"loot_decoy"});
  tac.rules.by_pair[{"deploy_decoy", "bypass"}] =
      simple_rule({"hold_back"}, {"probe_edge"});
  tac.rules.by_pair[{"guard", "take_bait"}] = simple_rule({"set_trap"}, {"loot_decoy"});
  tac.rules.by_pair[{"guard", "bypass"}] = simple_rule({"patrol"}, {"probe_edge"});
  s.tactical["campaign"] = tac;

  s.thresholds.winning_echelons = {Echelon::kPolicy};
  s.thresholds.defender[Echelon::kPolicy] = 0.4;
  s.thresholds.defender[Echelon::kTactical] = 0.0;  // Theta_d^T
  s.thresholds.attacker[Echelon::kPolicy] = 0.7;
  s.shocks.push_back({"bait-value", "tactical.campaign.pair_payoff.sacrifice_asset.loot_decoy.d",
                      0.05});
  s.deviations.echelons = {Echelon::kStrategic};
  s.solver.stability_epsilon = 0.25;
  return s;
}

OperationalTemplate recon_template() {
  OperationalTemplate t;
  t.deception = "decoy_credentials";
  t.states = {"quiet", "probed"};
  t.initial_state = "quiet";
  t.horizon = 2;
  t.actions_d = {{"monitor", 0.0}, {"rotate_credentials", 1.0}};
  t.actions_a = {{"scan", 0.0}, {"harvest", 0.0}};
  t.state_payoff = {{"quiet", 0.5}, {"probed", -0.5}};
  t.context_payoff = 0.2;
  set_row(t, "quiet", "monitor", "scan", {{"quiet", 0.6}, {"probed", 0.4}});
  set_row(t, "quiet", "monitor", "harvest", {{"quiet", 0.3}, {"probed", 0.7}});
  set_row(t, "quiet", "rotate_credentials", "scan", {{"quiet", 0.9}, {"probed", 0.1}});
  set_row(t, "quiet", "rotate_credentials", "harvest", {{"quiet", 0.7}, {"probed", 0.3}});
  set_row(t, "probed", "monitor", "scan", {{"quiet", 0.2}, {"probed", 0.8}});
  set_row(t, "probed", "monitor", "harvest", {{"probed", 1.0}});
  set_row(t, "probed", "rotate_credentials", "scan", {{"quiet", 0.6}, {"probed", 0.4}});
  set_row(t, "probed", "rotate_credentials", "harvest", {{"quiet", 0.4}, {"probed", 0.6}});
  return t;
}

TacticalSection recon_tactics() {
  TacticalSection tac;
  tac.catalog.tactics_d = {"plant_decoys", "watch_logs"};
  tac.catalog.tactics_a = {"credential_stuffing", "quiet_recon"};
  zero_sum_pairs(tac.catalog, {{0.8, -0.2}, {0.3, 0.1}});
  tac.rules.default_rule = simple_rule({"plant_decoys", "watch_logs"},
                                       {"credential_stuffing", "quiet_recon"}, 2, 1);
  return tac;
}

OperationalTemplate disruption_template() {
  OperationalTemplate t;
  t.deception = "honeypots";
  t.states = {"stable", "degraded"};
  t.initial_state = "stable";
  t.horizon = 2;
  t.actions_d = {{"reroute", 0.0}, {"isolate_segment", 1.0}};
  t.actions_a = {{"ddos", 0.0}, {"ics_malware", 0.0}};
  t.state_payoff = {{"stable", 1.0}, {"degraded", -1.0}};
  t.context_payoff = 0.0;
  set_row(t, "stable", "reroute", "ddos", {{"stable", 0.7}, {"degraded", 0.3}});
  set_row(t, "stable", "reroute", "ics_malware", {{"stable", 0.4}, {"degraded", 0.6}});
  set_row(t, "stable", "isolate_segment", "ddos", {{"stable", 0.9}, {"degraded", 0.1}});
  set_row(t, "stable", "isolate_segment", "ics_malware",
          {{"stable", 0.8}, {"degraded", 0.2}});
  set_row(t, "degraded", "reroute", "ddos", {{"stable", 0.3}, {"degraded", 0.7}});
  set_row(t, "degraded", "reroute", "ics_malware", {{"degraded", 1.0}});
  set_row(t, "degraded", "isolate_segment", "ddos", {{"stable", 0.6}, {"degraded", 0.4}});
  set_row(t, "degraded", "isolate_segment", "ics_malware",
          {{"stable", 0.5}, {"degraded", 0.5}});
  return t;
}

TacticalSection disruption_tactics() {
  TacticalSection tac;
  tac.catalog.tactics_d = {"island_microgrid", "static_mirror"};
  tac.catalog.tactics_a = {"flood_portal", "trip_breakers"};
  zero_sum_pairs(tac.catalog, {{0.5, -0.4}, {-0.2, 0.6}});
  tac.rules.default_rule =
      simple_rule({"island_microgrid", "static_mirror"}, {"flood_portal", "trip_breakers"});
  return tac;
}

OperationalTemplate escalation_template() {
  OperationalTemplate t;
  t.deception = "canaries";
  t.states = {"tense", "critical"};
  t.initial_state = "tense";
  t.horizon = 2;
  t.general_sum = true;
  t.actions_d = {{"audit", 0.0}, {"rollback", 1.0}};
  t.actions_a = {{"deepfake", 0.0}, {"stuff_credentials", 0.0}};
  t.state_payoff = {{"tense", 0.0}, {"critical", -1.0}};
  t.context_payoff = 0.3;
  set_row(t, "tense", "audit", "deepfake", {{"tense", 0.6}, {"critical", 0.4}});
  set_row(t, "tense", "audit", "stuff_credentials", {{"tense", 0.8}, {"critical", 0.2}});
  set_row(t, "tense", "rollback", "deepfake", {{"tense", 0.9}, {"critical", 0.1}});
  set_row(t, "tense", "rollback", "stuff_credentials", {{"tense", 0.7}, {"critical", 0.3}});
  set_row(t, "critical", "audit", "deepfake", {{"critical", 1.0}});
  set_row(t, "critical", "audit", "stuff_credentials", {{"tense", 0.3}, {"critical", 0.7}});
  set_row(t, "critical", "rollback", "deepfake", {{"tense", 0.5}, {"critical", 0.5}});
  set_row(t, "critical", "rollback", "stuff_credentials",
          {{"tense", 0.6}, {"critical", 0.4}});
  return t;
}

TacticalSection escalation_tactics() {
  TacticalSection tac;
  tac.catalog.tactics_d = {"livestream_audit", "paper_backup"};
  tac.catalog.tactics_a = {"forge_results", "jam_channels"};
  // General-sum: collateral costs can hit both sides.
  tac.catalog.pair_payoff[{"livestream_audit", "forge_results"}] = {0.6, -0.5};
  tac.catalog.pair_payoff[{"livestream_audit", "jam_channels"}] = {-0.2, -0.3};
  tac.catalog.pair_payoff[{"paper_backup", "forge_results"}] = {0.4, 0.1};
  tac.catalog.pair_payoff[{"paper_backup", "jam_channels"}] = {0.1, 0.2};
  tac.rules.default_rule =
      simple_rule({"livestream_audit", "paper_backup"}, {"forge_results", "jam_channels"});
  return tac;
}

OperationalTemplate sustained_template() {
  OperationalTemplate t;
  t.deception = "tarpits";
  t.states = {"grind", "entrenched"};
  t.initial_state = "grind";
  t.horizon = 3;
  t.actions_d = {{"segment_data", 0.0}, {"rotate_keys", 1.0}};
  t.actions_a = {{"breach_dump", 0.0}, {"spearphish", 0.0}};
  t.state_payoff = {{"grind", 0.2}, {"entrenched", -0.6}};
  t.context_payoff = 0.1;
  set_row(t, "grind", "segment_data", "breach_dump", {{"grind", 0.7}, {"entrenched", 0.3}});
  set_row(t, "grind", "segment_data", "spearphish", {{"grind", 0.5}, {"entrenched", 0.5}});
  set_row(t, "grind", "rotate_keys", "breach_dump", {{"grind", 0.9}, {"entrenched", 0.1}});
  set_row(t, "grind", "rotate_keys", "spearphish", {{"grind", 0.8}, {"entrenched", 0.2}});
  set_row(t, "entrenched", "segment_data", "breach_dump", {{"entrenched", 1.0}});
  set_row(t, "entrenched", "segment_data", "spearphish",
          {{"grind", 0.2}, {"entrenched", 0.8}});
  set_row(t, "entrenched", "rotate_keys", "breach_dump",
          {{"grind", 0.4}, {"entrenched", 0.6}});
  set_row(t, "entrenched", "rotate_keys", "spearphish",
          {{"grind", 0.5}, {"entrenched", 0.5}});
  return t;
}

TacticalSection sustained_tactics() {
  TacticalSection tac;
  tac.catalog.tactics_d = {"tarpit_sessions", "rotate_secrets"};
  tac.catalog.tactics_a = {"reseed_access", "dump_records"};
  zero_sum_pairs(tac.catalog, {{0.4, -0.1}, {0.0, 0.5}});
  tac.rules.default_rule =
      simple_rule({"tarpit_sessions", "rotate_secrets"}, {"reseed_access", "dump_records"});
  return tac;
}

OperationalTemplate messaging_template() {
  OperationalTemplate t;
  t.deception = "canaries";
  t.states = {"contested"};
  t.initial_state = "contested";
  t.horizon = 2;
  t.actions_d = {{"signed_factcheck", 0.0}, {"takedown", 1.0}};
  t.actions_a = {{"spoof_embassy", 0.0}, {"amplify", 0.0}};
  t.state_payoff = {{"contested", 0.3}};
  t.context_payoff = 0.0;
  default_self_loops(t);
  return t;
}

TacticalSection messaging_tactics() {
  TacticalSection tac;
  tac.catalog.tactics_d = {"verified_banner", "rapid_takedown"};
  tac.catalog.tactics_a = {"relief_phish", "inevitability_spin"};
  zero_sum_pairs(tac.catalog, {{0.3, 0.0}, {-0.1, 0.4}});
  tac.rules.default_rule =
      simple_rule({"verified_banner", "rapid_takedown"}, {"relief_phish", "inevitability_spin"});
  return tac;
}

Scenario redcyber_small_scenario() {
  Scenario s;
  s.metadata.name = "redcyber-small";
  s.metadata.description = "Reduced staged-campaign fixture (three operations, "
                           "small action sets) sized for exact solving.";
  s.metadata.illustrative_numbers = true;

  s.coalition.players = {"taiwan", "allies"};
  s.coalition.defender = "taiwan";
  s.coalition.values = {{"taiwan", 1.2}, {"allies", 0.8}, {"taiwan+allies", 2.6}};
  s.coalition.budget_rule = {3.2, 0.5};

  s.strategic.operations = {"reconnaissance", "disruption", "sustained_assault"};
  s.strategic.base_weights = {
      {"reconnaissance", 0.4}, {"disruption", 0.35}, {"sustained_assault", 0.25}};
  s.strategic.attacker_budget = 3.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"reconnaissance", {ContestKind::kLottery, 1.0}},
                          {"disruption", {ContestKind::kLottery, 1.5}},
                          {"sustained_assault", {ContestKind::kLottery, 1.0}}};
  s.strategic.value_range_min = -2.0;
  s.strategic.value_range_max = 6.0;
  // Weights stay at their base values: the reduced fixture exercises the
  // value/budget/feedback loop, which settles well inside the iteration
  // budget; the weight-evolution channel lives in the full variant.
  s.strategic.weight_learning_rate = 0.0;

  s.operational["reconnaissance"] = recon_template();
  s.operational["disruption"] = disruption_template();
  s.operational["sustained_assault"] = sustained_template();
  // Zero action costs keep the compiled games independent of allocation
  // granularity, which the reduced instance needs to settle quickly.
  for (auto& [op, tmpl] : s.operational)
    for (auto& action : tmpl.actions_d) action.cost = 0.0;
  s.tactical["reconnaissance"] = recon_tactics();
  s.tactical["disruption"] = disruption_tactics();
  s.tactical["sustained_assault"] = sustained_tactics();

  s.thresholds.winning_echelons = {Echelon::kPolicy};
  s.thresholds.defender[Echelon::kPolicy] = 0.9;
  s.thresholds.defender[Echelon::kTactical] = -1.0;
  s.thresholds.attacker[Echelon::kPolicy] = 1.0;
  s.shocks.push_back({"budget-surge", "policy.budget", 0.5});
  s.shocks.push_back({"sharper-contests", "tech.theta.contest_sharpness", 0.25});
  s.deviations.echelons = {Echelon::kStrategic, Echelon::kOperational};
  s.solver.stability_epsilon = 1.0;
  return s;
}

}  // namespace

Scenario redcyber_scenario() {
  Scenario s;
  s.metadata.name = "redcyber";
  s.metadata.description =
      "Staged cyber-campaign example: five operations running from "
      "reconnaissance to strategic messaging with deception mechanisms "
      "(honeypots, decoy credentials, canaries, tarpits) wired into the "
      "operational games. All numeric payoffs are illustrative fixtures, "
      "not calibrated measurements.";
  s.metadata.notes =
      "Signaling and leader-follower phase framings are encoded with the "
      "stochastic and bimatrix machinery available in this engine.";
  s.metadata.illustrative_numbers = true;
  s.metadata.campaign_stages = {
      "Policy & Preparation (k=0)", "Reconnaissance (k1)", "Initial Disruption (k2)",
      "Escalation (k3)", "Sustained Operations"};

  s.coalition.players = {"taiwan", "allies"};
  s.coalition.defender = "taiwan";
  s.coalition.values = {{"taiwan", 1.2}, {"allies", 0.8}, {"taiwan+allies", 2.6}};
  s.coalition.budget_rule = {6.2, 0.5};

  s.strategic.operations = {"reconnaissance", "disruption", "escalation",
                            "sustained_assault", "strategic_messaging"};
  // Deliberately incommensurate weights: tied allocation vertices make the
  // funding pattern flip between sweeps instead of settling.
  s.strategic.base_weights = {{"reconnaissance", 0.2683},
                              {"disruption", 0.2231},
                              {"escalation", 0.1907},
                              {"sustained_assault", 0.1783},
                              {"strategic_messaging", 0.1396}};
  s.strategic.attacker_budget = 6.0;
  s.strategic.grid_step = 1.0;
  s.strategic.contests = {{"reconnaissance", {ContestKind::kLottery, 1.0}},
                          {"disruption", {ContestKind::kLottery, 1.5}},
                          {"escalation", {ContestKind::kLottery, 1.2}},
                          {"sustained_assault", {ContestKind::kLottery, 0.9}},
                          {"strategic_messaging", {ContestKind::kLottery, 0.8}}};
  s.strategic.value_range_min = -2.0;
  s.strategic.value_range_max = 6.0;
  // Objective weights stay at doctrine: with contribution tracking enabled
  // the drift direction is nearly neutral (shares follow weights) and the
  // example would creep toward its attractor for thousands of sweeps.
  s.strategic.weight_learning_rate = 0.0;

  s.operational["reconnaissance"] = recon_template();
  s.operational["disruption"] = disruption_template();
  s.operational["escalation"] = escalation_template();
  s.operational["sustained_assault"] = sustained_template();
  s.operational["strategic_messaging"] = messaging_template();
  // Keep the budget coupling visible without parking any cost right at an
  // affordability boundary: cheap actions are free, heavy ones cost more
  // than any per-stage share the budget can provide.
  for (auto& [op, tmpl] : s.operational)
    for (auto& action : tmpl.actions_d) action.cost = action.cost > 0.0 ? 2.5 : 0.0;
  s.tactical["reconnaissance"] = recon_tactics();
  s.tactical["disruption"] = disruption_tactics();
  s.tactical["escalation"] = escalation_tactics();
  s.tactical["sustained_assault"] = sustained_tactics();
  s.tactical["strategic_messaging"] = messaging_tactics();

  s.thresholds.winning_echelons = {Echelon::kPolicy};
  s.thresholds.defender[Echelon::kPolicy] = 0.9;
  s.thresholds.defender[Echelon::kTactical] = -1.0;
  s.thresholds.attacker[Echelon::kPolicy] = 1.0;
  s.shocks.push_back({"budget-surge", "policy.budget", 1.0});
  s.shocks.push_back({"sharper-contests", "tech.theta.contest_sharpness", 0.25});
  s.shocks.push_back({"recon-drift", "operational.reconnaissance.transition.quiet.monitor.scan.probed",
                      0.05});
  s.deviations.echelons = {Echelon::kStrategic};
  s.solver.stability_epsilon = 2.0;
  return s;
}

Scenario instantiate_template(TaxonomyCategory category) {
  switch (category) {
    case TaxonomyCategory::kSymmetric: {
      // Mirror-image conflict: equal budgets, zero-sum payoffs throughout.
      Scenario s;
      s.metadata.name = "symmetric-template";
      s.metadata.description = "Mirror-image conflict skeleton: equal budgets and "
                               "mirrored payoffs (u_d = -u_a) everywhere.";
      s.coalition.players = {"blue"};
      s.coalition.defender = "blue";
      s.coalition.values = {{"blue", 1.0}};
      s.coalition.budget_rule = {2.0, 0.0};
      s.strategic.operations = {"front"};
      s.strategic.base_weights = {{"front", 1.0}};
      s.strategic.attacker_budget = 2.0;  // equal to the defender's
      s.strategic.grid_step = 1.0;
      s.strategic.contests = {{"front", {ContestKind::kWinnerTakeAll, 1.0}}};
      s.strategic.value_range_min = -1.0;
      s.strategic.value_range_max = 1.0;
      s.operational["front"] = trivial_operation("none", 0.0, 0.0);
      TacticalSection tac;
      tac.catalog.tactics_d = {"advance", "feint"};
      tac.catalog.tactics_a = {"advance", "feint"};
      zero_sum_pairs(tac.catalog, {{0.0, 0.5}, {-0.5, 0.0}});
      tac.rules.default_rule = simple_rule({"advance", "feint"}, {"advance", "feint"});
      s.tactical["front"] = tac;
      s.thresholds = vacuous_thresholds();
      s.deviations.echelons = {Echelon::kStrategic};
      return s;
    }
    case TaxonomyCategory::kAsymmetric: {
      // Resource imbalance: the defender fights outgunned at unequal costs.
      Scenario s;
      s.metadata.name = "asymmetric-template";
      s.metadata.description = "Security-game skeleton with resource imbalance: "
                               "defender budget below the attacker's, unequal "
                               "action costs.";
      s.coalition.players = {"guard"};
      s.coalition.defender = "guard";
      s.coalition.values = {{"guard", 1.0}};
      s.coalition.budget_rule = {1.0, 1.0};  // budget 2 < attacker budget 4
      s.strategic.operations = {"perimeter"};
      s.strategic.base_weights = {{"perimeter", 1.0}};
      s.strategic.attacker_budget = 4.0;
      s.strategic.grid_step = 1.0;
      s.strategic.contests = {{"perimeter", {ContestKind::kLottery, 1.0}}};
      s.strategic.value_range_min = -1.0;
      s.strategic.value_range_max = 1.0;
      OperationalTemplate t = trivial_operation("honeypots", 0.0, 0.0);
      t.actions_d = {{"watch", 0.0}, {"patrol", 1.0}, {"lockdown", 2.0}};
      t.actions_a = {{"smash", 0.0}, {"grind", 0.0}};
      t.horizon = 2;
      t.transition.clear();
      default_self_loops(t);
      s.operational["perimeter"] = t;
      TacticalSection tac;
      tac.catalog.tactics_d = {"cheap_trick"};
      tac.catalog.tactics_a = {"brute_force"};
      zero_sum_pairs(tac.catalog, {{-0.25}});
      tac.rules.default_rule = simple_rule({"cheap_trick"}, {"brute_force"});
      s.tactical["perimeter"] = tac;
      s.thresholds = vacuous_thresholds();
      s.deviations.echelons = {Echelon::kStrategic};
      return s;
    }
    case TaxonomyCategory::kEscalatory: {
      // Action/counteraction ladder: the state climbs and payoffs climb along
      // with it, stage after stage.
      Scenario s;
      s.metadata.name = "escalatory-template";
      s.metadata.description = "Repeated/stochastic skeleton: an escalation ladder "
                               "with at least three stages and non-decreasing "
                               "stage payoffs along it.";
      s.coalition.players = {"state_actor"};
      s.coalition.defender = "state_actor";
      s.coalition.values = {{"state_actor", 1.0}};
      s.coalition.budget_rule = {2.0, 0.0};
      s.strategic.operations = {"ladder"};
      s.strategic.base_weights = {{"ladder", 1.0}};
      s.strategic.attacker_budget = 2.0;
      s.strategic.grid_step = 1.0;
      s.strategic.contests = {{"ladder", {ContestKind::kLottery, 1.0}}};
      s.strategic.value_range_min = 0.0;
      s.strategic.value_range_max = 8.0;
      OperationalTemplate t;
      t.deception = "canaries";
      t.states = {"calm", "tension", "conflict", "crisis"};
      t.initial_state = "calm";
      t.horizon = 4;
      t.actions_d = {{"hold", 0.0}, {"counter", 0.0}};
      t.actions_a = {{"push", 0.0}, {"pause", 0.0}};
      t.state_payoff = {{"calm", 0.0}, {"tension", 0.5}, {"conflict", 1.0}, {"crisis", 1.5}};
      t.context_payoff = 0.0;
      for (std::size_t i = 0; i < t.states.size(); ++i) {
        const std::string& here = t.states[i];
        const std::string& up = t.states[std::min(i + 1, t.states.size() - 1)];
        Row contested;
        contested[here] += 0.5;
        contested[up] += 0.5;  // collapses to a self-loop at the top rung
        set_row(t, here, "hold", "push", {{up, 1.0}});
        set_row(t, here, "counter", "push", std::move(contested));
        set_row(t, here, "hold", "pause", {{here, 1.0}});
        set_row(t, here, "counter", "pause", {{here, 1.0}});
      }
      s.operational["ladder"] = t;
      s.tactical["ladder"] = single_pair_tactics(0.25);
      s.thresholds = vacuous_thresholds();
      s.deviations.echelons = {Echelon::kStrategic};
      return s;
    }
  }
  ThrowInternal("unknown taxonomy category");
}

TaxonomyCategory taxonomy_category_from_string(const std::string& name) {
  if (name == "asymmetric") return TaxonomyCategory::kAsymmetric;
  if (name == "symmetric") return TaxonomyCategory::kSymmetric;
  if (name == "escalatory") return TaxonomyCategory::kEscalatory;
  throw Error(ErrorClass::kValidation, "UnknownCategory",
              "unknown template category '" + name + "'");
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "minimal") return minimal_scenario();
  if (name == "degenerate") return degenerate_scenario();
  if (name == "strategic-test") return strategic_test_scenario();
  if (name == "decoy-sacrifice") return decoy_sacrifice_scenario();
  if (name == "redcyber") return redcyber_scenario();
  if (name == "redcyber-small") return redcyber_small_scenario();
  ThrowValidation("builtin", "unknown builtin scenario '" + name + "'");
}

std::vector<std::string> builtin_scenario_names() {
  return {"minimal", "degenerate", "strategic-test", "decoy-sacrifice", "redcyber",
          "redcyber-small"};
}

}  // namespace echelon
