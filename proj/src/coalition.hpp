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

#ifndef ECHELON_COALITION_HPP_
#define ECHELON_COALITION_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tech.hpp"

namespace echelon {

// Transferable-utility coalition game. `value[mask]` is v(S) for the player
// subset encoded by `mask`; value[0] must be 0 and every subset must be
// present (size 2^n). Hard cap n <= 16 keeps enumeration exact.
struct CoalitionGame {
  int n_players = 0;
  std::vector<double> value;  // indexed by bitmask, size 1 << n_players

  double v(unsigned mask) const { return value[mask]; }
};

inline constexpr int kMaxCoalitionPlayers = 16;

struct PayoffVector {
  std::vector<double> shares;
};

struct CoreVerdict {
  bool in_core = false;
  // Most violated coalition (mask) and its shortfall when not in the core.
  std::optional<unsigned> violating_coalition;
  double violation = 0.0;
};

// Affine budget rule applied to the defender's Shapley share:
//   budget = base + scale * shapley[defender] * tech.budget_multiplier
// clamped at zero. `scale` must be nonnegative, keeping the rule monotone in
// the defender's coalition contributions.
struct BudgetRule {
  double base = 0.0;
  double scale = 1.0;
};

// Policy echelon outcome: objective weights over operations plus the budget
// the strategic game may spend.
struct PolicyOutcome {
  std::map<std::string, double> weights;  // simplex over operation ids
  double budget = 0.0;
};

// Exact Shapley values: permutation enumeration for n <= 10, subset sums
// weighted by |S|!(n-|S|-1)!/n! beyond. Throws TooManyPlayers for n > 16.
PayoffVector shapley_value(const CoalitionGame& game);

// x is in the core iff it is efficient and no coalition can improve on it;
// reports one maximally violated coalition otherwise.
CoreVerdict core_membership(const CoalitionGame& game, const PayoffVector& x);

PolicyOutcome policy_equilibrium(const CoalitionGame& game, int defender_index,
                                 const std::map<std::string, double>& base_weights,
                                 const BudgetRule& rule, const TechLevel& tech);

}  // namespace echelon

#endif  // ECHELON_COALITION_HPP_
