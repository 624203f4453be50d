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
// Test-only oracles, kept independent of the solver paths they check.

#ifndef ECHELON_TESTS_ORACLES_HPP_
#define ECHELON_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace echelon::oracle {

// --------------------------------------------------------------------------
// Zero-sum game value bracket by direct search over mixed strategies.
//
// Any defender mixture x gives the valid lower bound min_j x.M_j and any
// attacker mixture y gives the valid upper bound max_i M_i.y, so the bracket
// is sound no matter how the candidate mixtures were produced. The search
// uses regret matching, which shares no code path with the solver under
// test; only the certified bracket enters assertions.
// --------------------------------------------------------------------------

struct ValueBracket {
  double lower;
  double upper;
};

namespace detail {

inline double worst_case_row(const std::vector<std::vector<double>>& m,
                             const std::vector<double>& x) {
  const int cols = static_cast<int>(m[0].size());
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cols; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) v += x[i] * m[i][j];
    worst = std::min(worst, v);
  }
  return worst;
}

inline double worst_case_col(const std::vector<std::vector<double>>& m,
                             const std::vector<double>& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) v += y[j] * m[i][j];
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace detail

namespace detail {

inline std::vector<double> normalized_positive(const std::vector<double>& r) {
  double sum = 0.0;
  for (double v : r) sum += std::max(v, 0.0);
  std::vector<double> out(r.size());
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / r.size());
  } else {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::max(r[i], 0.0) / sum;
  }
  return out;
}

}  // namespace detail

// Tightens the bracket with regret-matching self-play (alternating updates,
// linear averaging). Chunks keep doubling until the certified bracket is
// narrower than `target` or the iteration cap is hit.
inline ValueBracket zero_sum_value_bracket(
    const std::vector<std::vector<double>>& payoff, double target = 1e-4) {
  const int m = static_cast<int>(payoff.size());
  const int n = static_cast<int>(payoff[0].size());

  std::vector<double> regret_d(m, 0.0), regret_a(n, 0.0);
  std::vector<double> avg_d(m, 0.0), avg_a(n, 0.0);
  ValueBracket best{-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};

  std::int64_t t = 0;
  for (std::int64_t chunk = 20000; t < 4000000; chunk *= 2) {
    for (std::int64_t it = 0; it < chunk; ++it) {
      ++t;
      std::vector<double> x = detail::normalized_positive(regret_d);
      // Attacker responds to x, then the defender responds to the updated
      // attacker policy (alternation speeds convergence).
      std::vector<double> util_a(n, 0.0);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) util_a[j] -= x[i] * payoff[i][j];
      std::vector<double> y = detail::normalized_positive(regret_a);
      double ev_a = 0.0;
      for (int j = 0; j < n; ++j) ev_a += y[j] * util_a[j];
      for (int j = 0; j < n; ++j)
        regret_a[j] = std::max(0.0, regret_a[j] + util_a[j] - ev_a);
      y = detail::normalized_positive(regret_a);

      std::vector<double> util_d(m, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) util_d[i] += y[j] * payoff[i][j];
      double ev_d = 0.0;
      for (int i = 0; i < m; ++i) ev_d += x[i] * util_d[i];
      for (int i = 0; i < m; ++i)
        regret_d[i] = std::max(0.0, regret_d[i] + util_d[i] - ev_d);

      const double w = static_cast<double>(t);
      for (int i = 0; i < m; ++i) avg_d[i] += w * x[i];
      for (int j = 0; j < n; ++j) avg_a[j] += w * y[j];
    }

    std::vector<double> xbar = avg_d, ybar = avg_a;
    double sx = 0.0, sy = 0.0;
    for (double v : xbar) sx += v;
    for (double v : ybar) sy += v;
    for (double& v : xbar) v /= sx;
    for (double& v : ybar) v /= sy;
    best.lower = std::max(best.lower, detail::worst_case_row(payoff, xbar));
    best.upper = std::min(best.upper, detail::worst_case_col(payoff, ybar));
    if (best.upper - best.lower <= target) break;
  }
  return best;
}

// --------------------------------------------------------------------------
// Shapley value by full permutation enumeration (n <= ~8).
// Coalition values are indexed by bitmask; v[0] must be 0.
// --------------------------------------------------------------------------
inline std::vector<double> shapley_by_permutations(int n, const std::vector<double>& v) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  std::int64_t count = 0;
  do {
    unsigned mask = 0;
    for (int idx : order) {
      unsigned with = mask | (1u << idx);
      phi[idx] += v[with] - v[mask];
      mask = with;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= static_cast<double>(count);
  return phi;
}

// --------------------------------------------------------------------------
// Small deterministic RNG wrapper for randomized-property tests.
// --------------------------------------------------------------------------
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : rng_(seed) {}
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_unit() * (hi - lo + 1 - 1e-12));
  }
  double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

 private:
  double next_unit() { return (rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
};

}  // namespace echelon::oracle

#endif  // ECHELON_TESTS_ORACLES_HPP_
