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

#include "operational.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "errors.hpp"

namespace echelon {
namespace {

constexpr double kRowTol = 1e-9;

void check_spec(const StochasticGameSpec& spec) {
  const int s_count = spec.n_states();
  const int d_count = spec.n_actions_d();
  const int a_count = spec.n_actions_a();
  if (s_count < 1) ThrowValidation("operational.states", "need at least one state");
  if (d_count < 1 || a_count < 1)
    ThrowValidation("operational.actions", "both sides need at least one action");
  if (spec.horizon < 1 || spec.horizon > kMaxHorizon)
    ThrowValidation("operational.horizon",
                    "must be in 1.." + std::to_string(kMaxHorizon));
  if (spec.initial_state < 0 || spec.initial_state >= s_count)
    ThrowValidation("operational.initial_state", "out of range");
  if (static_cast<int>(spec.state_payoff.size()) != s_count)
    ThrowValidation("operational.state_payoff", "must cover every state");
  if (static_cast<int>(spec.tactical_term.size()) != d_count)
    ThrowValidation("operational.tactical_term", "must cover the action product");
  for (const auto& row : spec.tactical_term)
    if (static_cast<int>(row.size()) != a_count)
      ThrowValidation("operational.tactical_term", "must cover the action product");
  if (static_cast<int>(spec.transition.size()) != s_count)
    ThrowValidation("operational.transition", "must cover every state");
  for (int s = 0; s < s_count; ++s) {
    if (static_cast<int>(spec.transition[s].size()) != d_count)
      ThrowValidation("operational.transition", "missing defender action rows");
    for (int ad = 0; ad < d_count; ++ad) {
      if (static_cast<int>(spec.transition[s][ad].size()) != a_count)
        ThrowValidation("operational.transition", "missing attacker action rows");
      for (int aa = 0; aa < a_count; ++aa) {
        const auto& row = spec.transition[s][ad][aa];
        if (static_cast<int>(row.size()) != s_count)
          ThrowSolver("NonStochasticRow", "transition row has wrong length");
        double sum = 0.0;
        for (double p : row) {
          if (!(p >= -kRowTol) || !std::isfinite(p))
            ThrowSolver("NonStochasticRow", "transition probabilities must be >= 0");
          sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTol)
          ThrowSolver("NonStochasticRow",
                      "transition row sums to " + std::to_string(sum));
      }
    }
  }
  if (!spec.general_sum) {
    for (const auto& row : spec.tactical_term)
      for (const auto& [ud, ua] : row)
        if (std::abs(ua + ud) > 1e-9)
          ThrowValidation("operational.tactical_term",
                          "zero-sum mode requires mirrored tactical terms "
                          "(set general_sum otherwise)");
  }
}

void check_indices(const StochasticGameSpec& spec, int state, int ad, int aa) {
  if (state < 0 || state >= spec.n_states() || ad < 0 || ad >= spec.n_actions_d() ||
      aa < 0 || aa >= spec.n_actions_a())
    ThrowSolver("IndexOutOfRange", "stage payoff index out of range");
}

// Deterministic unit-interval sampler; the layout is fixed so trajectories
// are reproducible across platforms.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  int sample(const std::vector<double>& weights) {
    const double u = unit();
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

double stage_payoff(const StochasticGameSpec& spec, int state, int action_d,
                    int action_a) {
  check_indices(spec, state, action_d, action_a);
  return spec.tactical_term[action_d][action_a].first + spec.state_payoff[state] +
         spec.context_payoff;
}

double stage_payoff_attacker(const StochasticGameSpec& spec, int state, int action_d,
                             int action_a) {
  check_indices(spec, state, action_d, action_a);
  return spec.tactical_term[action_d][action_a].second - spec.state_payoff[state] -
         spec.context_payoff;
}

OperationalSolution solve_operational(const StochasticGameSpec& spec) {
  check_spec(spec);
  const int K = spec.horizon;
  const int s_count = spec.n_states();
  const int d_count = spec.n_actions_d();
  const int a_count = spec.n_actions_a();

  OperationalSolution sol;
  sol.value_d.assign(K + 1, std::vector<double>(s_count, 0.0));
  sol.value_a.assign(K + 1, std::vector<double>(s_count, 0.0));
  sol.policy_d.assign(K, std::vector<MixedStrategy>(s_count));
  sol.policy_a.assign(K, std::vector<MixedStrategy>(s_count));

  for (int k = K - 1; k >= 0; --k) {
    for (int s = 0; s < s_count; ++s) {
      if (!spec.general_sum) {
        MatrixGame stage;
        stage.payoff.assign(d_count, std::vector<double>(a_count));
        for (int ad = 0; ad < d_count; ++ad)
          for (int aa = 0; aa < a_count; ++aa) {
            double v = stage_payoff(spec, s, ad, aa);
            const auto& row = spec.transition[s][ad][aa];
            for (int t = 0; t < s_count; ++t) v += row[t] * sol.value_d[k + 1][t];
            stage.payoff[ad][aa] = v;
          }
        EquilibriumProfile p = solve_zero_sum(stage);
        sol.value_d[k][s] = p.value_d;
        sol.value_a[k][s] = -p.value_d;
        sol.policy_d[k][s] = p.strategy_d;
        sol.policy_a[k][s] = p.strategy_a;
      } else {
        BimatrixGame stage;
        stage.payoff_d.assign(d_count, std::vector<double>(a_count));
        stage.payoff_a.assign(d_count, std::vector<double>(a_count));
        for (int ad = 0; ad < d_count; ++ad)
          for (int aa = 0; aa < a_count; ++aa) {
            double vd = stage_payoff(spec, s, ad, aa);
            double va = stage_payoff_attacker(spec, s, ad, aa);
            const auto& row = spec.transition[s][ad][aa];
            for (int t = 0; t < s_count; ++t) {
              vd += row[t] * sol.value_d[k + 1][t];
              va += row[t] * sol.value_a[k + 1][t];
            }
            stage.payoff_d[ad][aa] = vd;
            stage.payoff_a[ad][aa] = va;
          }
        EquilibriumProfile p = solve_bimatrix(stage);
        sol.value_d[k][s] = p.value_d;
        sol.value_a[k][s] = p.value_a;
        sol.policy_d[k][s] = p.strategy_d;
        sol.policy_a[k][s] = p.strategy_a;
      }
    }
  }
  sol.cumulative_value_d = sol.value_d[0][spec.initial_state];
  return sol;
}

double verify_solution(const StochasticGameSpec& spec, const OperationalSolution& sol) {
  check_spec(spec);
  const int K = spec.horizon;
  const int s_count = spec.n_states();
  const int d_count = spec.n_actions_d();
  const int a_count = spec.n_actions_a();
  double worst = 0.0;
  for (int s = 0; s < s_count; ++s) {
    worst = std::max(worst, std::abs(sol.value_d[K][s]));
    worst = std::max(worst, std::abs(sol.value_a[K][s]));
  }
  for (int k = K - 1; k >= 0; --k) {
    for (int s = 0; s < s_count; ++s) {
      BimatrixGame stage;
      stage.payoff_d.assign(d_count, std::vector<double>(a_count));
      stage.payoff_a.assign(d_count, std::vector<double>(a_count));
      for (int ad = 0; ad < d_count; ++ad)
        for (int aa = 0; aa < a_count; ++aa) {
          double vd = stage_payoff(spec, s, ad, aa);
          double va = spec.general_sum ? stage_payoff_attacker(spec, s, ad, aa)
                                       : -stage_payoff(spec, s, ad, aa);
          const auto& row = spec.transition[s][ad][aa];
          for (int t = 0; t < s_count; ++t) {
            vd += row[t] * sol.value_d[k + 1][t];
            va += row[t] * sol.value_a[k + 1][t];
          }
          stage.payoff_d[ad][aa] = vd;
          stage.payoff_a[ad][aa] = va;
        }
      // Realized stage value under the recorded policies must match the
      // recorded value, and the policy pair must be a stage equilibrium.
      EquilibriumProfile recorded;
      recorded.strategy_d = sol.policy_d[k][s];
      recorded.strategy_a = sol.policy_a[k][s];
      double realized = 0.0;
      for (int ad = 0; ad < d_count; ++ad)
        for (int aa = 0; aa < a_count; ++aa)
          realized += recorded.strategy_d.weights[ad] * recorded.strategy_a.weights[aa] *
                      stage.payoff_d[ad][aa];
      worst = std::max(worst, std::abs(realized - sol.value_d[k][s]));
      worst = std::max(worst, exploitability(stage, recorded));
    }
  }
  return worst;
}

Trajectory simulate(const StochasticGameSpec& spec, const OperationalSolution& sol,
                    std::uint64_t seed) {
  check_spec(spec);
  if (static_cast<int>(sol.policy_d.size()) != spec.horizon ||
      static_cast<int>(sol.policy_a.size()) != spec.horizon)
    ThrowValidation("simulate", "solution does not match the spec horizon");

  SeededSampler sampler(seed);
  Trajectory out;
  int state = spec.initial_state;
  for (int k = 0; k < spec.horizon; ++k) {
    const int ad = sampler.sample(sol.policy_d[k][state].weights);
    const int aa = sampler.sample(sol.policy_a[k][state].weights);
    const double payoff = stage_payoff(spec, state, ad, aa);
    out.steps.push_back({k, state, ad, aa, payoff});
    out.total_payoff_d += payoff;
    state = sampler.sample(spec.transition[state][ad][aa]);
  }
  return out;
}

}  // namespace echelon
