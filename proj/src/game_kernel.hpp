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

#ifndef ECHELON_GAME_KERNEL_HPP_
#define ECHELON_GAME_KERNEL_HPP_

#include <cstdint>
#include <vector>

namespace echelon {

// Finite zero-sum game in normal form. `payoff[i][j]` is the row player's
// (defender's) gain when the row player picks i and the column player picks
// j; the column player receives the negation.
struct MatrixGame {
  std::vector<std::vector<double>> payoff;

  int rows() const { return static_cast<int>(payoff.size()); }
  int cols() const { return payoff.empty() ? 0 : static_cast<int>(payoff[0].size()); }
};

// Finite two-player general-sum game in normal form; `payoff_d` and
// `payoff_a` share dimensions.
struct BimatrixGame {
  std::vector<std::vector<double>> payoff_d;
  std::vector<std::vector<double>> payoff_a;

  int rows() const { return static_cast<int>(payoff_d.size()); }
  int cols() const { return payoff_d.empty() ? 0 : static_cast<int>(payoff_d[0].size()); }
};

// Probability vector over one player's action set.
struct MixedStrategy {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

struct EquilibriumProfile {
  MixedStrategy strategy_d;
  MixedStrategy strategy_a;
  double value_d = 0.0;
  double value_a = 0.0;
  // Maximum unilateral improvement either player can realize by deviating.
  double epsilon = 0.0;
};

enum class EquilibriumSelectionRule {
  // Maximize value_d, break ties by value_a, then by lexicographic supports.
  kDefenderOptimal,
  kAttackerOptimal,
};

struct EquilibriumEnumeration {
  std::vector<EquilibriumProfile> profiles;
  // Set when at least one support system was singular and skipped.
  bool degenerate = false;
};

// Default per-side action cap for support enumeration.
inline constexpr int kEnumerationCap = 64;

// Exact game value and a minimax/maximin strategy pair via a self-contained
// simplex (rational arithmetic for small games, stabilized floating point
// beyond). Throws NonFiniteEntry on non-finite payoffs.
EquilibriumProfile solve_zero_sum(const MatrixGame& game);

// All support-enumeration equilibria. Singular support systems are skipped
// and flagged rather than perturbed. Throws EnumerationCapExceeded when an
// action count exceeds `cap` or the support-pair count is intractable.
EquilibriumEnumeration enumerate_equilibria(const BimatrixGame& game,
                                            int cap = kEnumerationCap);

// The enumeration's equilibrium selected by `rule`.
EquilibriumProfile solve_bimatrix(
    const BimatrixGame& game,
    EquilibriumSelectionRule rule = EquilibriumSelectionRule::kDefenderOptimal,
    int cap = kEnumerationCap);

// max over both players of (best-response value - realized value); >= 0 up
// to rounding.
double exploitability(const BimatrixGame& game, const EquilibriumProfile& profile);

// Empirical-frequency strategies after `iterations` rounds of simultaneous
// fictitious play with lowest-index tie-breaking; epsilon carries the
// measured exploitability.
EquilibriumProfile fictitious_play(const MatrixGame& game, std::int64_t iterations);

// Zero-sum view of a matrix game, for shared bimatrix machinery.
BimatrixGame as_bimatrix(const MatrixGame& game);

}  // namespace echelon

#endif  // ECHELON_GAME_KERNEL_HPP_
