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

#include "strategic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "game_kernel.hpp"

namespace echelon {
namespace {

constexpr double kGridTol = 1e-9;

long long budget_units(double budget, double grid_step, const char* what) {
  if (grid_step <= 0.0) ThrowValidation("strategic.grid_step", "must be positive");
  if (budget < -kGridTol) ThrowValidation(what, "budget must be nonnegative");
  const double raw = budget / grid_step;
  const long long units = std::llround(raw);
  if (std::abs(raw - static_cast<double>(units)) > kGridTol)
    ThrowValidation(what, "budget must be an integer multiple of grid_step");
  return std::max(0LL, units);
}

double composition_count(long long units, int parts, bool with_slack) {
  // C(units + parts - 1, parts - 1), or C(units + parts, parts) with slack.
  const long long n = with_slack ? units + parts : units + parts - 1;
  const long long k = with_slack ? parts : parts - 1;
  double c = 1.0;
  for (long long i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
  return c;
}

void check_feasible(const StrategicGame& game, const Allocation& alloc,
                    double budget, const char* who) {
  if (static_cast<int>(alloc.size()) != game.n_ops())
    ThrowSolver("InfeasibleAllocation",
                std::string(who) + ": allocation length does not match operations");
  double total = 0.0;
  for (double a : alloc) {
    if (a < -kGridTol)
      ThrowSolver("InfeasibleAllocation", std::string(who) + ": negative amount");
    const double units = a / game.grid_step;
    if (std::abs(units - std::llround(units)) > kGridTol)
      ThrowSolver("InfeasibleAllocation",
                  std::string(who) + ": amount is not a grid multiple");
    total += a;
  }
  if (total > budget + kGridTol)
    ThrowSolver("InfeasibleAllocation", std::string(who) + ": budget exceeded");
  if (!game.allow_slack && std::abs(total - budget) > kGridTol)
    ThrowSolver("InfeasibleAllocation",
                std::string(who) + ": full budget must be spent (allow_slack off)");
}

void emit_compositions(long long remaining, int part, int parts, bool with_slack,
                       double grid_step, Allocation& scratch,
                       std::vector<Allocation>& out) {
  if (part == parts - 1) {
    if (with_slack) {
      for (long long u = 0; u <= remaining; ++u) {
        scratch[part] = static_cast<double>(u) * grid_step;
        out.push_back(scratch);
      }
    } else {
      scratch[part] = static_cast<double>(remaining) * grid_step;
      out.push_back(scratch);
    }
    return;
  }
  for (long long u = 0; u <= remaining; ++u) {
    scratch[part] = static_cast<double>(u) * grid_step;
    emit_compositions(remaining - u, part + 1, parts, with_slack, grid_step, scratch, out);
  }
}

}  // namespace

double contest_value(const ContestSpec& spec, double r_d, double r_a,
                     const TechLevel& tech) {
  if (r_d < 0.0 || r_a < 0.0)
    ThrowValidation("contest", "resources must be nonnegative");
  if (r_d == 0.0 && r_a == 0.0) return 0.5;
  switch (spec.kind) {
    case ContestKind::kWinnerTakeAll:
      if (r_d > r_a) return 1.0;
      if (r_d < r_a) return 0.0;
      return 0.5;
    case ContestKind::kLottery: {
      const double s = spec.sharpness * tech.contest_sharpness;
      if (s <= 0.0) ThrowValidation("contest.sharpness", "must be positive");
      const double pd = std::pow(r_d, s);
      const double pa = std::pow(r_a, s);
      return pd / (pd + pa);
    }
  }
  ThrowInternal("unknown contest kind");
}

double effective_contest(const StrategicGame& game, int op, double r_d, double r_a) {
  const double raw = contest_value(game.contests[op], r_d, r_a, game.tech);
  if (op >= static_cast<int>(game.overrides.size()) || !game.overrides[op])
    return raw;
  const ContestOverride& ov = *game.overrides[op];
  double v;
  if (ov.anchor_value > 1e-12) {
    v = raw * (ov.target / ov.anchor_value);
  } else {
    v = raw + ov.target;  // anchor level vanished; shift instead of scale
  }
  return std::clamp(v, 0.0, 1.0);
}

std::pair<double, double> strategic_payoff(const StrategicGame& game,
                                           const Allocation& r_d,
                                           const Allocation& r_a) {
  check_feasible(game, r_d, game.budget_d, "defender");
  check_feasible(game, r_a, game.budget_a, "attacker");
  double value = 0.0;
  for (int op = 0; op < game.n_ops(); ++op)
    value += game.weights[op] * effective_contest(game, op, r_d[op], r_a[op]);
  return {value, 1.0 - value};
}

std::vector<Allocation> enumerate_allocations(double budget, double grid_step,
                                              int n_ops, bool allow_slack) {
  if (n_ops < 1) ThrowValidation("strategic.operations", "need at least one operation");
  const long long units = budget_units(budget, grid_step, "strategic.budget");
  if (static_cast<double>(units) > kMaxBudgetUnits)
    ThrowSolver("CombinatorialBlowup",
                "budget of " + std::to_string(units) + " grid units exceeds the cap of " +
                    std::to_string(static_cast<long long>(kMaxBudgetUnits)));
  if (n_ops > kMaxExactOperations)
    ThrowSolver("CombinatorialBlowup",
                "exact enumeration supports at most " +
                    std::to_string(kMaxExactOperations) + " operations");
  const double count = composition_count(units, n_ops, allow_slack);
  if (count > kMaxAllocationCount)
    ThrowSolver("CombinatorialBlowup",
                "allocation count " + std::to_string(count) + " exceeds " +
                    std::to_string(kMaxAllocationCount));

  std::vector<Allocation> out;
  out.reserve(static_cast<std::size_t>(count));
  Allocation scratch(n_ops, 0.0);
  emit_compositions(units, 0, n_ops, allow_slack, grid_step, scratch, out);
  return out;
}

StrategicEquilibrium solve_strategic(const StrategicGame& game, StrategicMethod method,
                                     std::int64_t fp_iterations) {
  if (game.n_ops() < 1)
    ThrowValidation("strategic.operations", "need at least one operation");
  if (static_cast<int>(game.weights.size()) != game.n_ops() ||
      static_cast<int>(game.contests.size()) != game.n_ops())
    ThrowValidation("strategic", "weights/contests must align with operations");
  double wsum = 0.0;
  for (double w : game.weights) {
    if (w < -1e-12) ThrowValidation("strategic.weights", "must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    ThrowValidation("strategic.weights", "must sum to 1");

  const auto allocs_d =
      enumerate_allocations(game.budget_d, game.grid_step, game.n_ops(), game.allow_slack);
  const auto allocs_a =
      enumerate_allocations(game.budget_a, game.grid_step, game.n_ops(), game.allow_slack);
  const double entries =
      static_cast<double>(allocs_d.size()) * static_cast<double>(allocs_a.size());
  if (entries > 4.0e6)
    ThrowSolver("CombinatorialBlowup",
                "normal form with " + std::to_string(entries) + " entries is too large");

  MatrixGame normal_form;
  normal_form.payoff.assign(allocs_d.size(), std::vector<double>(allocs_a.size()));
  for (std::size_t i = 0; i < allocs_d.size(); ++i)
    for (std::size_t j = 0; j < allocs_a.size(); ++j) {
      double v = 0.0;
      for (int op = 0; op < game.n_ops(); ++op)
        v += game.weights[op] * effective_contest(game, op, allocs_d[i][op], allocs_a[j][op]);
      normal_form.payoff[i][j] = v;
    }

  EquilibriumProfile profile = method == StrategicMethod::kExactLp
                                   ? solve_zero_sum(normal_form)
                                   : fictitious_play(normal_form, fp_iterations);

  StrategicEquilibrium eq;
  eq.value_d = profile.value_d;
  eq.exploitability = profile.epsilon;
  eq.grid_step = game.grid_step;
  eq.mean_d.assign(game.n_ops(), 0.0);
  eq.mean_a.assign(game.n_ops(), 0.0);
  for (std::size_t i = 0; i < allocs_d.size(); ++i) {
    const double w = profile.strategy_d.weights[i];
    if (w > 1e-12) {
      eq.mix_d.push_back({allocs_d[i], w});
      for (int op = 0; op < game.n_ops(); ++op) eq.mean_d[op] += w * allocs_d[i][op];
    }
  }
  for (std::size_t j = 0; j < allocs_a.size(); ++j) {
    const double w = profile.strategy_a.weights[j];
    if (w > 1e-12) {
      eq.mix_a.push_back({allocs_a[j], w});
      for (int op = 0; op < game.n_ops(); ++op) eq.mean_a[op] += w * allocs_a[j][op];
    }
  }
  return eq;
}

}  // namespace echelon
