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

#ifndef ECHELON_STRATEGIC_HPP_
#define ECHELON_STRATEGIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tech.hpp"

namespace echelon {

enum class ContestKind { kLottery, kWinnerTakeAll };

// Per-operation contest function. Lottery follows the ratio form
// r_d^s / (r_d^s + r_a^s) with s = sharpness * tech.contest_sharpness;
// winner-take-all awards 1/0 with 0.5 on ties. Empty contests (both zero)
// are worth 0.5 under either kind.
struct ContestSpec {
  ContestKind kind = ContestKind::kLottery;
  double sharpness = 1.0;
};

// Realized-outcome override installed by the operational feedback: the
// contest level realized at the equilibrium (`anchor_value`, the expected
// raw contest under the equilibrium mixtures) is replaced by `target`, and
// every other contest output is scaled multiplicatively by the same ratio
// (shifted additively when the anchor level vanishes).
struct ContestOverride {
  double anchor_value = 0.5;
  double target = 0.5;
};

// Resource-allocation game across operations. Budgets must be integer
// multiples of grid_step; every pure strategy allocates grid multiples and
// spends the full budget unless allow_slack is set.
struct StrategicGame {
  std::vector<std::string> operations;
  std::vector<double> weights;  // simplex over operations
  double budget_d = 0.0;
  double budget_a = 0.0;
  std::vector<ContestSpec> contests;  // one per operation
  double grid_step = 1.0;
  bool allow_slack = false;
  TechLevel tech;
  std::vector<std::optional<ContestOverride>> overrides;  // empty or one per op

  int n_ops() const { return static_cast<int>(operations.size()); }
};

using Allocation = std::vector<double>;  // aligned with StrategicGame::operations

struct WeightedAllocation {
  Allocation amounts;
  double weight = 0.0;
};

struct StrategicEquilibrium {
  std::vector<WeightedAllocation> mix_d;  // support only, deterministic order
  std::vector<WeightedAllocation> mix_a;
  double value_d = 0.5;
  double exploitability = 0.0;
  double grid_step = 1.0;
  Allocation mean_d;
  Allocation mean_a;
};

enum class StrategicMethod { kExactLp, kFictitiousPlay };

inline constexpr double kMaxBudgetUnits = 60.0;
inline constexpr int kMaxExactOperations = 6;
inline constexpr double kMaxAllocationCount = 2.0e6;

double contest_value(const ContestSpec& spec, double r_d, double r_a,
                     const TechLevel& tech);

// Contest value for one operation with any feedback override applied.
double effective_contest(const StrategicGame& game, int op, double r_d, double r_a);

// (value_d, value_a) with value_a = 1 - value_d; throws InfeasibleAllocation.
std::pair<double, double> strategic_payoff(const StrategicGame& game,
                                           const Allocation& r_d,
                                           const Allocation& r_a);

// All grid allocations of `budget` over n_ops operations, ascending
// lexicographic. Spend-all unless allow_slack.
std::vector<Allocation> enumerate_allocations(double budget, double grid_step,
                                              int n_ops, bool allow_slack = false);

StrategicEquilibrium solve_strategic(const StrategicGame& game,
                                     StrategicMethod method = StrategicMethod::kExactLp,
                                     std::int64_t fp_iterations = 100000);

}  // namespace echelon

#endif  // ECHELON_STRATEGIC_HPP_
