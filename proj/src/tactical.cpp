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

#include "tactical.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "game_kernel.hpp"

namespace echelon {
namespace {

double sequence_count(int n, int max_len, Repetition repetition) {
  double total = 0.0;
  if (repetition == Repetition::kAllowed) {
    double pow = 1.0;
    for (int len = 1; len <= max_len; ++len) {
      pow *= n;
      total += pow;
    }
  } else {
    double falling = 1.0;
    for (int len = 1; len <= std::min(max_len, n); ++len) {
      falling *= n - (len - 1);
      total += falling;
    }
  }
  return total;
}

void emit_sequences(const std::vector<std::string>& allowed, int target_len,
                    Repetition repetition, std::vector<int>& picked,
                    std::vector<bool>& used, std::vector<TacticSequence>& out) {
  if (static_cast<int>(picked.size()) == target_len) {
    TacticSequence seq;
    seq.reserve(target_len);
    for (int idx : picked) seq.push_back(allowed[idx]);
    out.push_back(std::move(seq));
    return;
  }
  for (int i = 0; i < static_cast<int>(allowed.size()); ++i) {
    if (repetition == Repetition::kForbidden && used[i]) continue;
    picked.push_back(i);
    used[i] = true;
    emit_sequences(allowed, target_len, repetition, picked, used, out);
    picked.pop_back();
    used[i] = false;
  }
}

std::pair<double, double> step_payoff(const TacticCatalog& catalog,
                                      const std::string& td, const std::string& ta) {
  const bool d_idle = td == kIdleTactic;
  const bool a_idle = ta == kIdleTactic;
  if (d_idle && a_idle) return {0.0, 0.0};
  if (a_idle) {
    auto it = catalog.idle_payoff_d.find(td);
    if (it != catalog.idle_payoff_d.end()) return it->second;
    if (std::find(catalog.tactics_d.begin(), catalog.tactics_d.end(), td) ==
        catalog.tactics_d.end())
      ThrowSolver("UnknownTactic", "unknown defender tactic '" + td + "'");
    return {0.0, 0.0};
  }
  if (d_idle) {
    auto it = catalog.idle_payoff_a.find(ta);
    if (it != catalog.idle_payoff_a.end()) return it->second;
    if (std::find(catalog.tactics_a.begin(), catalog.tactics_a.end(), ta) ==
        catalog.tactics_a.end())
      ThrowSolver("UnknownTactic", "unknown attacker tactic '" + ta + "'");
    return {0.0, 0.0};
  }
  auto it = catalog.pair_payoff.find({td, ta});
  if (it == catalog.pair_payoff.end())
    ThrowSolver("UnknownTactic", "no payoff for tactic pair ('" + td + "', '" + ta + "')");
  return it->second;
}

FeasibilityRule idle_singleton_rule() {
  FeasibilityRule rule;
  rule.allowed_d = {kIdleTactic};
  rule.allowed_a = {kIdleTactic};
  rule.max_len_d = 1;
  rule.max_len_a = 1;
  return rule;
}

}  // namespace

std::vector<TacticSequence> enumerate_sequences(const std::vector<std::string>& allowed,
                                                int max_len, Repetition repetition) {
  if (allowed.empty())
    ThrowValidation("tactical.allowed", "allowed tactic set must be nonempty");
  if (max_len < 1) ThrowValidation("tactical.max_len", "must be >= 1");

  std::vector<std::string> sorted = allowed;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  const double count =
      sequence_count(static_cast<int>(sorted.size()), max_len, repetition);
  if (count > static_cast<double>(kEnumerationCap))
    ThrowSolver("EnumerationCapExceeded",
                std::to_string(static_cast<long long>(count)) +
                    " feasible sequences exceed the cap of " +
                    std::to_string(kEnumerationCap));

  std::vector<TacticSequence> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> picked;
  std::vector<bool> used(sorted.size(), false);
  for (int len = 1; len <= max_len; ++len)
    emit_sequences(sorted, len, repetition, picked, used, out);
  return out;
}

std::pair<double, double> sequence_payoff(const TacticCatalog& catalog,
                                          const TacticSequence& xi_d,
                                          const TacticSequence& xi_a) {
  if (catalog.step_discount <= 0.0 || catalog.step_discount > 1.0)
    ThrowValidation("tactical.step_discount", "must lie in (0, 1]");
  const std::size_t steps = std::max(xi_d.size(), xi_a.size());
  double ud = 0.0, ua = 0.0;
  double discount = 1.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const std::string& td = i < xi_d.size() ? xi_d[i] : kIdleTactic;
    const std::string& ta = i < xi_a.size() ? xi_a[i] : kIdleTactic;
    auto [pd, pa] = step_payoff(catalog, td, ta);
    ud += discount * pd;
    ua += discount * pa;
    discount *= catalog.step_discount;
  }
  return {ud, ua};
}

TacticalOutcome solve_tactical(const TacticCatalog& catalog, const FeasibilityRule& rule) {
  const auto seqs_d = enumerate_sequences(rule.allowed_d, rule.max_len_d, rule.repetition);
  const auto seqs_a = enumerate_sequences(rule.allowed_a, rule.max_len_a, rule.repetition);

  BimatrixGame game;
  game.payoff_d.assign(seqs_d.size(), std::vector<double>(seqs_a.size()));
  game.payoff_a.assign(seqs_d.size(), std::vector<double>(seqs_a.size()));
  for (std::size_t i = 0; i < seqs_d.size(); ++i)
    for (std::size_t j = 0; j < seqs_a.size(); ++j) {
      auto [ud, ua] = sequence_payoff(catalog, seqs_d[i], seqs_a[j]);
      game.payoff_d[i][j] = ud;
      game.payoff_a[i][j] = ua;
    }

  EquilibriumProfile profile = solve_bimatrix(game);
  TacticalOutcome out;
  out.U_dT = profile.value_d;
  out.U_aT = profile.value_a;
  out.epsilon = profile.epsilon;
  for (std::size_t i = 0; i < seqs_d.size(); ++i)
    if (profile.strategy_d.weights[i] > 1e-12) {
      out.xi_d = seqs_d[i];
      break;
    }
  for (std::size_t j = 0; j < seqs_a.size(); ++j)
    if (profile.strategy_a.weights[j] > 1e-12) {
      out.xi_a = seqs_a[j];
      break;
    }
  return out;
}

std::pair<std::vector<TacticSequence>, std::vector<TacticSequence>> ana_O_to_T(
    const TacticalRuleTable& table, const std::string& action_d,
    const std::string& action_a) {
  const FeasibilityRule* rule = nullptr;
  auto it = table.by_pair.find({action_d, action_a});
  if (it != table.by_pair.end()) {
    rule = &it->second;
  } else if (table.default_rule) {
    rule = &*table.default_rule;
  }
  FeasibilityRule fallback = idle_singleton_rule();
  if (!rule) rule = &fallback;
  return {enumerate_sequences(rule->allowed_d, rule->max_len_d, rule->repetition),
          enumerate_sequences(rule->allowed_a, rule->max_len_a, rule->repetition)};
}

std::vector<std::vector<std::pair<double, double>>> cata_T_to_O(
    const std::map<std::pair<std::string, std::string>, TacticalOutcome>& outcomes,
    const std::vector<OperationalAction>& actions_d,
    const std::vector<OperationalAction>& actions_a) {
  std::vector<std::vector<std::pair<double, double>>> table(
      actions_d.size(), std::vector<std::pair<double, double>>(actions_a.size()));
  for (std::size_t i = 0; i < actions_d.size(); ++i)
    for (std::size_t j = 0; j < actions_a.size(); ++j) {
      auto it = outcomes.find({actions_d[i].id, actions_a[j].id});
      if (it == outcomes.end())
        ThrowSolver("MissingPair", "no tactical outcome for action pair ('" +
                                       actions_d[i].id + "', '" + actions_a[j].id + "')");
      table[i][j] = {it->second.U_dT, it->second.U_aT};
    }
  return table;
}

}  // namespace echelon
