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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "meta.hpp"

using namespace echelon;

TEST_CASE("degenerate fixture: the sweep is the identity") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  CHECK(result.trace.iterations.size() <= 2);
  CHECK(result.trace.final_residual == doctest::Approx(0.0).epsilon(1e-12));

  // phi of the fixed point is the fixed point.
  auto swept = phi(result.config, s);
  CHECK(coordinate_distance(result.config, swept) <= 1e-12);
}

TEST_CASE("degenerate fixture: all four round trips are exact") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  for (auto pair : {HyloPair::kPolicyStrategy, HyloPair::kStrategyOperation,
                    HyloPair::kOperationTactic, HyloPair::kPolicyTactic})
    CHECK(check_hylomorphism(result.config, s, pair) <= 1e-9);
}

TEST_CASE("full damping still converges to the same fixed point") {
  Scenario s = builtin_scenario("degenerate");
  auto fast = find_warfare_equilibrium(s, 1.0, 1e-6, 200);
  auto slow = find_warfare_equilibrium(s, 0.3, 1e-6, 200);
  REQUIRE(fast.trace.converged);
  REQUIRE(slow.trace.converged);
  CHECK(fast.trace.iterations.size() == 1);  // identity map converges at once
  CHECK(coordinate_distance(fast.config, slow.config) <= 2e-6);
}

TEST_CASE("missing tactical catalogs reduce the sweep to the S-O loop") {
  Scenario s = builtin_scenario("minimal");
  s.tactical.clear();
  s = parse_scenario(emit_scenario(s));  // revalidate
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 50);
  REQUIRE(result.trace.converged);
  // Every tactical term is the idle pair worth (0, 0), so the operational
  // value is the bare state + context sum.
  for (const auto& [op, outcomes] : result.config.tactical)
    for (const auto& [pair, outcome] : outcomes) {
      CHECK(outcome.U_dT == doctest::Approx(0.0));
      CHECK(outcome.U_aT == doctest::Approx(0.0));
    }
  CHECK(result.config.operational.at("op").cumulative_value_d == doctest::Approx(0.5));
}

TEST_CASE("perturbation: zero delta is the identity") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  auto report = perturb_and_propagate(result.config, s, "policy.budget", 0.0, 0.5, 1e-6, 200);
  CHECK(report.reconverged);
  CHECK(report.iterations <= 1);
  for (const auto& [echelon, delta] : report.deltas) {
    CHECK(delta.defender == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(delta.attacker == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("perturbation: one budget unit never hurts the strategic value") {
  Scenario s = builtin_scenario("strategic-test");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  CHECK(result.config.strategic.value_d == doctest::Approx(0.5).epsilon(1e-9));

  auto report = perturb_and_propagate(result.config, s, "policy.budget", 1.0, 0.5, 1e-6, 200);
  REQUIRE(report.reconverged);
  CHECK(report.deltas.at(Echelon::kStrategic).defender >= -1e-9);

  // Oracle: direct re-solve of the allocation game with one extra unit.
  StrategicGame game = ana_P_to_S(result.config.policy, s, s.tech, {});
  auto base = solve_strategic(game);
  game.budget_d += 1.0;
  auto richer = solve_strategic(game);
  CHECK(richer.value_d >= base.value_d - 1e-9);
  CHECK(report.perturbed.strategic.value_d == doctest::Approx(richer.value_d).epsilon(1e-9));
}

TEST_CASE("perturbation: off-support tactical payoffs do not move the policy echelon") {
  Scenario s = builtin_scenario("decoy-sacrifice");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  // (patrol, probe_edge) backs the (guard, bypass) encounter, which the
  // operational equilibrium never plays: the stage saddle is (deploy_decoy,
  // take_bait).
  auto report = perturb_and_propagate(
      result.config, s, "tactical.campaign.pair_payoff.patrol.probe_edge.d", 0.05, 0.5,
      1e-6, 200);
  REQUIRE(report.reconverged);
  CHECK(report.deltas.at(Echelon::kPolicy).defender == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.deltas.at(Echelon::kPolicy).attacker == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.deltas.at(Echelon::kStrategic).defender ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("assessment: decoy sacrifice loses a battle and wins the war") {
  Scenario s = builtin_scenario("decoy-sacrifice");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);

  // The equilibrium encounter really is the sacrificed decoy.
  const auto& outcome = result.config.tactical.at("campaign").at({"deploy_decoy", "take_bait"});
  CHECK(outcome.U_dT == doctest::Approx(-1.0));
  CHECK(outcome.xi_d == TacticSequence{"sacrifice_asset"});

  auto verdict = assess(result, s);
  CHECK(verdict.winning);
  CHECK(verdict.lose_battle_win_war);
  CHECK(verdict.stable);
}

TEST_CASE("assessment: vacuous thresholds always win") {
  Scenario s = builtin_scenario("minimal");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  auto verdict = assess(result, s);
  CHECK(verdict.winning);  // no thresholds declared anywhere
}

TEST_CASE("assessment: threshold comparison and monotone relaxation") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  auto verdict = assess(result, s);
  CHECK(verdict.winning);  // payoffs (0.5, 0.5) vs thresholds (0.2, 0.9)

  // Tightening past the payoff flips the verdict; relaxing cannot.
  Scenario tight = s;
  tight.thresholds.defender[Echelon::kPolicy] = 0.6;
  auto tight_verdict = assess(result, tight);
  CHECK_FALSE(tight_verdict.winning);

  Scenario loose = s;
  loose.thresholds.defender[Echelon::kPolicy] = -5.0;
  loose.thresholds.attacker[Echelon::kPolicy] = 5.0;
  CHECK(assess(result, loose).winning);
}

TEST_CASE("assessment: requires convergence") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  result.trace.converged = false;
  CHECK_THROWS_WITH_AS(assess(result, s), doctest::Contains("NotConverged"), Error);
}

TEST_CASE("redcyber-small: converges with certified round trips") {
  Scenario s = builtin_scenario("redcyber-small");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  CHECK(result.trace.final_residual <= 1e-6);
  for (auto pair : {HyloPair::kPolicyStrategy, HyloPair::kStrategyOperation,
                    HyloPair::kOperationTactic, HyloPair::kPolicyTactic})
    CHECK(check_hylomorphism(result.config, s, pair) <= 1e-6);
  auto verdict = assess(result, s);
  CHECK(verdict.winning);
}

TEST_CASE("hylomorphism: perturbed configurations are not fixed points") {
  Scenario s = builtin_scenario("degenerate");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  WarfareConfiguration nudged = result.config;
  nudged.policy.budget *= 1.10;
  // One grid unit of extra budget changes the strategic game: with winner-
  // take-all contests the defender now holds the field outright.
  nudged.policy.budget = 3.0;
  CHECK(check_hylomorphism(nudged, s, HyloPair::kPolicyStrategy) > 1e-6);
}

TEST_CASE("hylomorphism: composed residual against the partial triangle") {
  Scenario s = builtin_scenario("decoy-sacrifice");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  // Measure all four at a few displaced configurations and record the
  // composition slack; the bound is measured, not assumed.
  for (double bump : {0.0, 0.5, 1.0}) {
    WarfareConfiguration probe = result.config;
    probe.policy.budget += bump;
    const double ps = check_hylomorphism(probe, s, HyloPair::kPolicyStrategy);
    const double so = check_hylomorphism(probe, s, HyloPair::kStrategyOperation);
    const double ot = check_hylomorphism(probe, s, HyloPair::kOperationTactic);
    const double pt = check_hylomorphism(probe, s, HyloPair::kPolicyTactic);
    const double slack = pt - (ps + so + ot);
    CHECK(slack <= 1.0);  // measured composition slack stays modest here
    if (bump == 0.0) CHECK(pt <= 1e-9);
  }
}

TEST_CASE("cata_S_to_P: weight update follows the learning rate") {
  Scenario s = builtin_scenario("strategic-test");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  StrategicGame game = ana_P_to_S(result.config.policy, s, s.tech, result.config.feedback);

  // eta_w = 0 keeps weights untouched.
  auto fold = cata_S_to_P(result.config.strategic, game, s, result.config.policy.weights);
  CHECK(fold.weights.at("north") == doctest::Approx(0.5));
  CHECK(fold.defender_value ==
        doctest::Approx(s.strategic.value_unit * result.config.strategic.value_d));

  // eta_w = 1 jumps straight to the contribution shares, which are equal in
  // this symmetric game.
  Scenario learning = s;
  learning.strategic.weight_learning_rate = 1.0;
  auto jumped = cata_S_to_P(result.config.strategic, game, learning,
                            {{"north", 0.9}, {"south", 0.1}});
  CHECK(jumped.weights.at("north") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(jumped.weights.at("south") == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ana_P_to_S: budget zero leaves only the all-zero allocation") {
  Scenario s = builtin_scenario("strategic-test");
  PolicyOutcome broke;
  broke.weights = s.strategic.base_weights;
  broke.budget = 0.0;
  StrategicGame game = ana_P_to_S(broke, s, s.tech, {});
  auto allocs = enumerate_allocations(game.budget_d, game.grid_step, game.n_ops(),
                                      game.allow_slack);
  REQUIRE(allocs.size() == 1);
  CHECK(allocs[0] == Allocation{0.0, 0.0});
}

TEST_CASE("ana_P_to_S: zero-weight operations cannot contribute") {
  Scenario s = builtin_scenario("strategic-test");
  PolicyOutcome lopsided;
  lopsided.weights = {{"north", 1.0}, {"south", 0.0}};
  lopsided.budget = 3.0;
  StrategicGame game = ana_P_to_S(lopsided, s, s.tech, {});
  auto [vd1, va1] = strategic_payoff(game, {3, 0}, {0, 3});
  auto [vd2, va2] = strategic_payoff(game, {3, 0}, {3, 0});
  // South's contest outcome never matters.
  CHECK(vd1 == doctest::Approx(1.0));  // north: 3 vs 0
  CHECK(vd2 == doctest::Approx(0.5));  // north: 3 vs 3 tie
}

TEST_CASE("ana_S_to_O: funding, filtering, and starvation") {
  Scenario s = builtin_scenario("redcyber-small");
  StrategicEquilibrium strat;
  strat.mean_d = {2.0, 0.0, 1.0};  // disruption unfunded
  strat.mean_a = {1.0, 1.0, 1.0};
  strat.grid_step = 1.0;
  auto compiled = ana_S_to_O(strat, s, s.tech);
  CHECK(compiled.specs.count("reconnaissance") == 1);
  CHECK(compiled.specs.count("disruption") == 0);
  CHECK(compiled.specs.count("sustained_assault") == 1);
  // Zero costs: nothing is filtered.
  CHECK(compiled.specs.at("reconnaissance").actions_d.size() == 2);

  // Starvation: raise every defender cost above the share.
  Scenario starved = s;
  for (auto& action : starved.operational.at("reconnaissance").actions_d) action.cost = 99.0;
  auto dropped = ana_S_to_O(strat, starved, starved.tech);
  CHECK(dropped.specs.count("reconnaissance") == 0);
  REQUIRE(!dropped.diagnostics.empty());
  CHECK(dropped.diagnostics[0].find("NoFeasibleAction") != std::string::npos);
  CHECK(dropped.diagnostics[0].find("reconnaissance") != std::string::npos);
}

TEST_CASE("tech masks restrict compiled action sets") {
  Scenario s = builtin_scenario("redcyber-small");
  s.tech.action_mask_d = {{"monitor", "reroute", "segment_data"}};
  StrategicEquilibrium strat;
  strat.mean_d = {1.0, 1.0, 1.0};
  strat.mean_a = {1.0, 1.0, 1.0};
  strat.grid_step = 1.0;
  auto compiled = ana_S_to_O(strat, s, s.tech);
  CHECK(compiled.specs.at("reconnaissance").actions_d.size() == 1);
  CHECK(compiled.specs.at("reconnaissance").actions_d[0].id == "monitor");
}

TEST_CASE("simulation batches are seed-deterministic") {
  Scenario s = builtin_scenario("redcyber-small");
  auto result = find_warfare_equilibrium(s, 0.5, 1e-6, 200);
  REQUIRE(result.trace.converged);
  auto a = simulate_operations(result.config, 42, 5);
  auto b = simulate_operations(result.config, 42, 5);
  REQUIRE(a.size() == b.size());
  for (const auto& [op, list] : a) {
    for (std::size_t i = 0; i < list.size(); ++i)
      CHECK(list[i].total_payoff_d == b.at(op)[i].total_payoff_d);
  }
  auto c = simulate_operations(result.config, 43, 5);
  bool any_diff = false;
  for (const auto& [op, list] : a)
    for (std::size_t i = 0; i < list.size(); ++i)
      any_diff |= list[i].total_payoff_d != c.at(op)[i].total_payoff_d;
  CHECK(any_diff);
}

TEST_CASE("weight evolution drifts toward realized contributions") {
  // A two-operation variant with live contribution tracking: the sweep keeps
  // the weights on the simplex while pulling them toward the shares.
  Scenario s = builtin_scenario("strategic-test");
  s.strategic.weight_learning_rate = 0.3;
  s.strategic.base_weights = {{"north", 0.7}, {"south", 0.3}};
  s = parse_scenario(emit_scenario(s));
  auto result = find_warfare_equilibrium(s, 0.5, 1e-4, 300);
  double sum = 0.0;
  for (const auto& [op, w] : result.config.policy.weights) {
    CHECK(w >= -1e-12);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  // Symmetric fields: contributions equalize, so the weights drift toward
  // the uniform point from (0.7, 0.3).
  CHECK(std::abs(result.config.policy.weights.at("north") - 0.5) < 0.2);
}
