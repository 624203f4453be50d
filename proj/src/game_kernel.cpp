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

#include "game_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"

namespace echelon {
namespace {

// Matrices at or below this entry count are solved in exact rational
// arithmetic; larger ones fall back to stabilized floating point.
constexpr int kRationalEntryLimit = 2500;
// Support enumeration walks C(rows+cols, rows) support pairs; refuse beyond
// this, the same way the per-side cap refuses wide games.
constexpr double kSupportPairLimit = 2.0e7;

void check_finite(const std::vector<std::vector<double>>& m) {
  for (const auto& row : m)
    for (double v : row)
      if (!std::isfinite(v))
        ThrowSolver("NonFiniteEntry", "payoff matrix contains a non-finite entry");
}

void check_shape(const std::vector<std::vector<double>>& m, const char* what) {
  if (m.empty() || m[0].empty())
    ThrowSolver("NonFiniteEntry", std::string(what) + ": game must have at least one action per side");
  for (const auto& row : m)
    if (row.size() != m[0].size())
      ThrowInternal(std::string(what) + ": ragged payoff matrix");
}

// ---------------------------------------------------------------------------
// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0,
// so the all-slack basis is feasible. Bland's rule on both the entering and
// leaving choice prevents cycling; with T = Rational the solve is exact.
// ---------------------------------------------------------------------------

template <typename T>
struct LpSolution {
  T objective;
  std::vector<T> primal;  // size n
  std::vector<T> dual;    // size m, one per constraint
};

template <typename T>
LpSolution<T> simplex_max(const std::vector<std::vector<T>>& A,
                          const std::vector<T>& b, const std::vector<T>& c) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  const int width = n + m + 1;  // structural vars, slacks, rhs

  std::vector<std::vector<T>> tab(m, std::vector<T>(width, T(0)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = A[i][j];
    tab[i][n + i] = T(1);
    tab[i][width - 1] = b[i];
  }
  // Objective row stores z_j - c_j; optimal when all entries >= 0.
  std::vector<T> obj(width, T(0));
  for (int j = 0; j < n; ++j) obj[j] = -c[j];

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  T scale = T(1);
  for (const auto& row : A)
    for (const auto& v : row) {
      T av = v < T(0) ? T(-v) : v;
      if (av > scale) scale = av;
    }

  const long max_pivots = 2000L + 64L * (m + n) * (m + n);
  for (long step = 0;; ++step) {
    if (step > max_pivots)
      ThrowSolver("SimplexStalled", "pivot budget exhausted");

    // Bland: lowest-index improving column.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (obj[j] < T(0) && !Scalar<T>::is_zero_pivot(obj[j], scale)) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    int leave = -1;
    T best_ratio = T(0);
    for (int i = 0; i < m; ++i) {
      const T& a = tab[i][enter];
      if (a > T(0) && !Scalar<T>::is_zero_pivot(a, scale)) {
        T ratio = tab[i][width - 1] / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0)
      ThrowSolver("UnboundedProgram", "objective unbounded; malformed game transform");

    // Pivot on (leave, enter).
    T piv = tab[leave][enter];
    for (int j = 0; j < width; ++j) tab[leave][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      T f = tab[i][enter];
      if (f == T(0)) continue;
      for (int j = 0; j < width; ++j) tab[i][j] -= f * tab[leave][j];
    }
    {
      T f = obj[enter];
      if (f != T(0))
        for (int j = 0; j < width; ++j) obj[j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  LpSolution<T> sol;
  sol.primal.assign(n, T(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) sol.primal[basis[i]] = tab[i][width - 1];
  sol.dual.assign(m, T(0));
  for (int i = 0; i < m; ++i) sol.dual[i] = obj[n + i];
  sol.objective = obj[width - 1];
  return sol;
}

// Minimax solve of M via the positive-shift transform: with Q = M + K > 0
// solve max 1.q s.t. Q q <= 1, q >= 0; then value = 1/sum(q) - K and the
// strategies are the rescaled primal (column player) and duals (row player).
template <typename T>
EquilibriumProfile solve_zero_sum_impl(const std::vector<std::vector<double>>& payoff) {
  const int m = static_cast<int>(payoff.size());
  const int n = static_cast<int>(payoff[0].size());

  double min_entry = payoff[0][0];
  for (const auto& row : payoff)
    for (double v : row) min_entry = std::min(min_entry, v);
  const double shift = 1.0 - min_entry;  // entries of Q are >= 1

  auto Q = convert_matrix<T>(payoff);
  const T k = Scalar<T>::from_double(shift);
  for (auto& row : Q)
    for (auto& v : row) v += k;

  std::vector<T> b(m, T(1)), c(n, T(1));
  LpSolution<T> lp = simplex_max<T>(Q, b, c);
  if (!(lp.objective > T(0)))
    ThrowInternal("zero-sum transform produced a non-positive objective");

  const T inv = T(1) / lp.objective;
  EquilibriumProfile out;
  out.strategy_a.weights.resize(n);
  out.strategy_d.weights.resize(m);
  for (int j = 0; j < n; ++j)
    out.strategy_a.weights[j] = Scalar<T>::to_double(lp.primal[j] * inv);
  for (int i = 0; i < m; ++i)
    out.strategy_d.weights[i] = Scalar<T>::to_double(lp.dual[i] * inv);
  out.value_d = Scalar<T>::to_double(inv) - shift;
  out.value_a = -out.value_d;
  return out;
}

void tidy_distribution(std::vector<double>& w) {
  double sum = 0.0;
  for (double& v : w) {
    if (v < 0.0 && v > -1e-12) v = 0.0;
    sum += v;
  }
  if (sum > 0.0)
    for (double& v : w) v /= sum;
}

// ---------------------------------------------------------------------------
// Support enumeration
// ---------------------------------------------------------------------------

template <typename T>
struct CandidateProfile {
  std::vector<T> x, y;  // full-length strategies
  T value_d, value_a;
  std::vector<int> support_d, support_a;
};

// Solves the indifference system for one support pair; nullopt when the
// system is singular or the candidate fails feasibility/best-response.
template <typename T>
std::optional<CandidateProfile<T>> try_support(
    const std::vector<std::vector<T>>& A, const std::vector<std::vector<T>>& B,
    const std::vector<int>& sd, const std::vector<int>& sa, const T& tol,
    bool* singular) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(A[0].size());
  const int k = static_cast<int>(sd.size());

  // Attacker mix y on sa equalizes the defender's supported rows:
  //   sum_j A[i][j] y_j - u = 0 for i in sd,  sum_j y_j = 1.
  std::vector<std::vector<T>> eq(k + 1, std::vector<T>(k + 1, T(0)));
  std::vector<T> rhs(k + 1, T(0));
  for (int r = 0; r < k; ++r) {
    for (int cidx = 0; cidx < k; ++cidx) eq[r][cidx] = A[sd[r]][sa[cidx]];
    eq[r][k] = T(-1);
  }
  for (int cidx = 0; cidx < k; ++cidx) eq[k][cidx] = T(1);
  rhs[k] = T(1);
  auto ysol = solve_linear<T>(eq, rhs);
  if (!ysol) {
    *singular = true;
    return std::nullopt;
  }

  // Defender mix x on sd equalizes the attacker's supported columns.
  for (int r = 0; r < k; ++r) {
    for (int cidx = 0; cidx < k; ++cidx) eq[r][cidx] = B[sd[cidx]][sa[r]];
    eq[r][k] = T(-1);
  }
  for (int cidx = 0; cidx < k; ++cidx) eq[k][cidx] = T(1);
  auto xsol = solve_linear<T>(eq, rhs);
  if (!xsol) {
    *singular = true;
    return std::nullopt;
  }

  const T u = (*ysol)[k];
  const T w = (*xsol)[k];
  for (int i = 0; i < k; ++i)
    if ((*ysol)[i] < tol || (*xsol)[i] < tol) return std::nullopt;

  CandidateProfile<T> cand;
  cand.x.assign(m, T(0));
  cand.y.assign(n, T(0));
  for (int i = 0; i < k; ++i) {
    cand.x[sd[i]] = (*xsol)[i];
    cand.y[sa[i]] = (*ysol)[i];
  }
  // Off-support actions must not beat the supported payoff.
  for (int i = 0; i < m; ++i) {
    T ai = T(0);
    for (int j = 0; j < n; ++j) ai += A[i][j] * cand.y[j];
    if (ai > u + tol) return std::nullopt;
  }
  for (int j = 0; j < n; ++j) {
    T bj = T(0);
    for (int i = 0; i < m; ++i) bj += B[i][j] * cand.x[i];
    if (bj > w + tol) return std::nullopt;
  }
  cand.value_d = u;
  cand.value_a = w;
  cand.support_d = sd;
  cand.support_a = sa;
  return cand;
}

void next_combination_init(std::vector<int>& comb, int k) {
  comb.resize(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
}

bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double support_pair_count(int m, int n) {
  // sum_k C(m,k) C(n,k) = C(m+n, m)
  double v = 1.0;
  for (int i = 1; i <= m; ++i) v *= static_cast<double>(n + i) / i;
  return v;
}

template <typename T>
EquilibriumEnumeration enumerate_impl(const BimatrixGame& game) {
  const int m = game.rows();
  const int n = game.cols();
  const auto A = convert_matrix<T>(game.payoff_d);
  const auto B = convert_matrix<T>(game.payoff_a);

  const T tol = []() {
    if constexpr (std::is_same_v<T, double>)
      return 1e-9;
    else
      return Rational(0);
  }();

  EquilibriumEnumeration out;
  std::vector<CandidateProfile<T>> found;
  bool singular_seen = false;

  for (int k = 1; k <= std::min(m, n); ++k) {
    std::vector<int> sd;
    next_combination_init(sd, k);
    do {
      std::vector<int> sa;
      next_combination_init(sa, k);
      do {
        bool singular = false;
        auto cand = try_support<T>(A, B, sd, sa, tol, &singular);
        singular_seen |= singular;
        if (cand) {
          bool dup = false;
          for (const auto& prev : found) {
            bool same = true;
            for (int i = 0; i < m && same; ++i) {
              T d = prev.x[i] - cand->x[i];
              if ((d < T(0) ? T(-d) : d) > T(1e-9)) same = false;
            }
            for (int j = 0; j < n && same; ++j) {
              T d = prev.y[j] - cand->y[j];
              if ((d < T(0) ? T(-d) : d) > T(1e-9)) same = false;
            }
            if (same) {
              dup = true;
              break;
            }
          }
          if (!dup) found.push_back(std::move(*cand));
        }
      } while (next_combination(sa, n));
    } while (next_combination(sd, m));
  }

  out.degenerate = singular_seen;
  out.profiles.reserve(found.size());
  BimatrixGame view = game;
  for (const auto& cand : found) {
    EquilibriumProfile p;
    p.strategy_d.weights.resize(m);
    p.strategy_a.weights.resize(n);
    for (int i = 0; i < m; ++i) p.strategy_d.weights[i] = Scalar<T>::to_double(cand.x[i]);
    for (int j = 0; j < n; ++j) p.strategy_a.weights[j] = Scalar<T>::to_double(cand.y[j]);
    tidy_distribution(p.strategy_d.weights);
    tidy_distribution(p.strategy_a.weights);
    p.value_d = Scalar<T>::to_double(cand.value_d);
    p.value_a = Scalar<T>::to_double(cand.value_a);
    p.epsilon = std::max(0.0, exploitability(view, p));
    out.profiles.push_back(std::move(p));
  }
  return out;
}

std::vector<int> support_of(const std::vector<double>& w) {
  std::vector<int> s;
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    if (w[i] > 1e-12) s.push_back(i);
  return s;
}

}  // namespace

EquilibriumProfile solve_zero_sum(const MatrixGame& game) {
  check_shape(game.payoff, "MatrixGame");
  check_finite(game.payoff);
  EquilibriumProfile p = (game.rows() * game.cols() <= kRationalEntryLimit)
                             ? solve_zero_sum_impl<Rational>(game.payoff)
                             : solve_zero_sum_impl<double>(game.payoff);
  tidy_distribution(p.strategy_d.weights);
  tidy_distribution(p.strategy_a.weights);
  p.epsilon = std::max(0.0, exploitability(as_bimatrix(game), p));
  return p;
}

EquilibriumEnumeration enumerate_equilibria(const BimatrixGame& game, int cap) {
  check_shape(game.payoff_d, "BimatrixGame");
  check_finite(game.payoff_d);
  check_finite(game.payoff_a);
  if (game.payoff_a.size() != game.payoff_d.size() ||
      game.payoff_a[0].size() != game.payoff_d[0].size())
    ThrowInternal("BimatrixGame payoff shapes differ");
  const int m = game.rows();
  const int n = game.cols();
  if (m > cap || n > cap)
    ThrowSolver("EnumerationCapExceeded",
                "action count " + std::to_string(std::max(m, n)) +
                    " exceeds the enumeration cap " + std::to_string(cap));
  const double pairs = support_pair_count(m, n);
  if (pairs > kSupportPairLimit)
    ThrowSolver("EnumerationCapExceeded",
                "support enumeration would visit ~" + std::to_string(pairs) +
                    " support pairs");
  if (pairs <= 20000.0) return enumerate_impl<Rational>(game);
  return enumerate_impl<double>(game);
}

EquilibriumProfile solve_bimatrix(const BimatrixGame& game,
                                  EquilibriumSelectionRule rule, int cap) {
  EquilibriumEnumeration all = enumerate_equilibria(game, cap);
  if (all.profiles.empty())
    ThrowSolver("DegenerateGame",
                "support enumeration found no equilibrium (degenerate game)");

  auto key = [&](const EquilibriumProfile& p) {
    double primary = rule == EquilibriumSelectionRule::kDefenderOptimal ? p.value_d : p.value_a;
    double secondary = rule == EquilibriumSelectionRule::kDefenderOptimal ? p.value_a : p.value_d;
    return std::pair<double, double>(primary, secondary);
  };
  const EquilibriumProfile* best = &all.profiles[0];
  for (const auto& p : all.profiles) {
    auto kp = key(p);
    auto kb = key(*best);
    if (kp.first > kb.first + 1e-12 ||
        (std::abs(kp.first - kb.first) <= 1e-12 && kp.second > kb.second + 1e-12)) {
      best = &p;
    } else if (std::abs(kp.first - kb.first) <= 1e-12 &&
               std::abs(kp.second - kb.second) <= 1e-12) {
      if (std::lexicographical_compare(
              support_of(p.strategy_d.weights).begin(), support_of(p.strategy_d.weights).end(),
              support_of(best->strategy_d.weights).begin(), support_of(best->strategy_d.weights).end()))
        best = &p;
    }
  }
  return *best;
}

double exploitability(const BimatrixGame& game, const EquilibriumProfile& profile) {
  const int m = game.rows();
  const int n = game.cols();
  if (profile.strategy_d.size() != m || profile.strategy_a.size() != n)
    ThrowInternal("exploitability: profile dimensions do not match the game");

  double realized_d = 0.0, realized_a = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double pij = profile.strategy_d.weights[i] * profile.strategy_a.weights[j];
      realized_d += pij * game.payoff_d[i][j];
      realized_a += pij * game.payoff_a[i][j];
    }
  double best_d = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += profile.strategy_a.weights[j] * game.payoff_d[i][j];
    best_d = std::max(best_d, v);
  }
  double best_a = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += profile.strategy_d.weights[i] * game.payoff_a[i][j];
    best_a = std::max(best_a, v);
  }
  return std::max(best_d - realized_d, best_a - realized_a);
}

EquilibriumProfile fictitious_play(const MatrixGame& game, std::int64_t iterations) {
  check_shape(game.payoff, "MatrixGame");
  check_finite(game.payoff);
  if (iterations < 1)
    ThrowSolver("InvalidIterationCount", "fictitious play needs iterations >= 1");

  const int m = game.rows();
  const int n = game.cols();
  std::vector<std::int64_t> count_d(m, 0), count_a(n, 0);
  count_d[0] = 1;
  count_a[0] = 1;
  std::vector<double> row_score(m, 0.0), col_score(n, 0.0);
  for (int i = 0; i < m; ++i) row_score[i] = game.payoff[i][0];
  for (int j = 0; j < n; ++j) col_score[j] = game.payoff[0][j];

  for (std::int64_t t = 1; t < iterations; ++t) {
    int br_d = 0;
    for (int i = 1; i < m; ++i)
      if (row_score[i] > row_score[br_d]) br_d = i;
    int br_a = 0;
    for (int j = 1; j < n; ++j)
      if (col_score[j] < col_score[br_a]) br_a = j;
    ++count_d[br_d];
    ++count_a[br_a];
    for (int i = 0; i < m; ++i) row_score[i] += game.payoff[i][br_a];
    for (int j = 0; j < n; ++j) col_score[j] += game.payoff[br_d][j];
  }

  EquilibriumProfile p;
  p.strategy_d.weights.resize(m);
  p.strategy_a.weights.resize(n);
  for (int i = 0; i < m; ++i)
    p.strategy_d.weights[i] = static_cast<double>(count_d[i]) / static_cast<double>(iterations);
  for (int j = 0; j < n; ++j)
    p.strategy_a.weights[j] = static_cast<double>(count_a[j]) / static_cast<double>(iterations);

  double v = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      v += p.strategy_d.weights[i] * p.strategy_a.weights[j] * game.payoff[i][j];
  p.value_d = v;
  p.value_a = -v;
  p.epsilon = std::max(0.0, exploitability(as_bimatrix(game), p));
  return p;
}

BimatrixGame as_bimatrix(const MatrixGame& game) {
  BimatrixGame b;
  b.payoff_d = game.payoff;
  b.payoff_a = game.payoff;
  for (auto& row : b.payoff_a)
    for (double& v : row) v = -v;
  return b;
}

}  // namespace echelon
