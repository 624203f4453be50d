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

#include "coalition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "errors.hpp"

namespace echelon {
namespace {

void check_game(const CoalitionGame& game) {
  if (game.n_players < 1)
    ThrowValidation("coalition.n_players", "must be >= 1");
  if (game.n_players > kMaxCoalitionPlayers)
    ThrowSolver("TooManyPlayers",
                "coalition game has " + std::to_string(game.n_players) +
                    " players; exact enumeration is capped at " +
                    std::to_string(kMaxCoalitionPlayers));
  const std::size_t want = std::size_t{1} << game.n_players;
  if (game.value.size() != want)
    ThrowValidation("coalition.value", "characteristic function must cover all subsets");
  if (game.value[0] != 0.0)
    ThrowValidation("coalition.value", "v(empty) must be 0");
  for (double v : game.value)
    if (!std::isfinite(v)) ThrowValidation("coalition.value", "values must be finite");
}

std::vector<double> shapley_by_permutations(const CoalitionGame& game) {
  const int n = game.n_players;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  std::int64_t perms = 0;
  do {
    unsigned mask = 0;
    for (int idx : order) {
      const unsigned with = mask | (1u << idx);
      phi[idx] += game.value[with] - game.value[mask];
      mask = with;
    }
    ++perms;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= static_cast<double>(perms);
  return phi;
}

std::vector<double> shapley_by_subset_sums(const CoalitionGame& game) {
  const int n = game.n_players;
  std::vector<double> factorial(n + 1, 1.0);
  for (int i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * i;

  std::vector<double> phi(n, 0.0);
  const unsigned full = (1u << n) - 1u;
  for (int i = 0; i < n; ++i) {
    const unsigned bit = 1u << i;
    for (unsigned mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      const int s = std::popcount(mask);
      const double weight = factorial[s] * factorial[n - s - 1] / factorial[n];
      phi[i] += weight * (game.value[mask | bit] - game.value[mask]);
    }
  }
  return phi;
}

}  // namespace

PayoffVector shapley_value(const CoalitionGame& game) {
  check_game(game);
  PayoffVector out;
  out.shares = game.n_players <= 10 ? shapley_by_permutations(game)
                                    : shapley_by_subset_sums(game);
  return out;
}

CoreVerdict core_membership(const CoalitionGame& game, const PayoffVector& x) {
  check_game(game);
  if (static_cast<int>(x.shares.size()) != game.n_players)
    ThrowValidation("core.payoff_vector", "length must equal the player count");

  constexpr double kTol = 1e-9;
  CoreVerdict verdict;
  const unsigned full = (1u << game.n_players) - 1u;

  double total = std::accumulate(x.shares.begin(), x.shares.end(), 0.0);
  if (std::abs(total - game.value[full]) > kTol) {
    verdict.in_core = false;
    verdict.violating_coalition = full;
    verdict.violation = game.value[full] - total;
    return verdict;
  }

  double worst = 0.0;
  std::optional<unsigned> worst_mask;
  for (unsigned mask = 1; mask <= full; ++mask) {
    double allocated = 0.0;
    for (int i = 0; i < game.n_players; ++i)
      if (mask & (1u << i)) allocated += x.shares[i];
    const double shortfall = game.value[mask] - allocated;
    if (shortfall > worst + kTol || (shortfall > kTol && !worst_mask)) {
      worst = shortfall;
      worst_mask = mask;
    }
  }
  if (worst_mask) {
    verdict.in_core = false;
    verdict.violating_coalition = worst_mask;
    verdict.violation = worst;
  } else {
    verdict.in_core = true;
  }
  return verdict;
}

PolicyOutcome policy_equilibrium(const CoalitionGame& game, int defender_index,
                                 const std::map<std::string, double>& base_weights,
                                 const BudgetRule& rule, const TechLevel& tech) {
  check_game(game);
  if (defender_index < 0 || defender_index >= game.n_players)
    ThrowValidation("policy.defender", "defender index out of range");
  if (rule.scale < 0.0)
    ThrowValidation("policy.budget_rule.scale", "must be nonnegative");

  const PayoffVector phi = shapley_value(game);
  PolicyOutcome out;
  out.weights = base_weights;
  out.budget = std::max(
      0.0, rule.base + rule.scale * phi.shares[defender_index] * tech.budget_multiplier);
  return out;
}

}  // namespace echelon
