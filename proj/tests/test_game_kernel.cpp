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
#include "game_kernel.hpp"
#include "oracles.hpp"

using namespace echelon;

namespace {

MatrixGame matching_pennies() { return {{{1, -1}, {-1, 1}}}; }

MatrixGame rock_paper_scissors() {
  return {{{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}};
}

BimatrixGame prisoners_dilemma() {
  // (C,C)=(3,3) (C,D)=(0,5) (D,C)=(5,0) (D,D)=(1,1)
  return {{{3, 0}, {5, 1}}, {{3, 5}, {0, 1}}};
}

BimatrixGame battle_of_sexes() {
  return {{{2, 0}, {0, 1}}, {{1, 0}, {0, 2}}};
}

}  // namespace

TEST_CASE("zero-sum: matching pennies") {
  auto p = solve_zero_sum(matching_pennies());
  CHECK(p.value_d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.strategy_d.weights[0] == doctest::Approx(0.5));
  CHECK(p.strategy_d.weights[1] == doctest::Approx(0.5));
  CHECK(p.strategy_a.weights[0] == doctest::Approx(0.5));
  CHECK(p.epsilon <= 1e-9 * 2);
}

TEST_CASE("zero-sum: 1x1 game") {
  auto p = solve_zero_sum(MatrixGame{{{7}}});
  CHECK(p.value_d == doctest::Approx(7.0));
  CHECK(p.strategy_d.weights[0] == doctest::Approx(1.0));
  CHECK(p.value_a == doctest::Approx(-7.0));
}

TEST_CASE("zero-sum: rock-paper-scissors uniform") {
  auto p = solve_zero_sum(rock_paper_scissors());
  CHECK(p.value_d == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(p.strategy_d.weights[i] == doctest::Approx(1.0 / 3));
    CHECK(p.strategy_a.weights[i] == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("zero-sum: rejects non-finite entries") {
  MatrixGame g{{{1.0, std::nan("")}}};
  CHECK_THROWS_WITH_AS(solve_zero_sum(g), doctest::Contains("NonFiniteEntry"), Error);
}

TEST_CASE("zero-sum: duality and certificate on random games") {
  oracle::TestRng rng(20260809);
  for (int trial = 0; trial < 60; ++trial) {
    int m = rng.uniform_int(1, 4), n = rng.uniform_int(1, 4);
    MatrixGame g;
    g.payoff.assign(m, std::vector<double>(n));
    double scale = 0.0;
    for (auto& row : g.payoff)
      for (double& v : row) {
        v = rng.uniform_int(-3, 3);
        scale = std::max(scale, std::abs(v));
      }
    auto p = solve_zero_sum(g);

    // maximin = minimax: solve the transposed negation (attacker's view).
    MatrixGame t;
    t.payoff.assign(n, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) t.payoff[j][i] = -g.payoff[i][j];
    auto q = solve_zero_sum(t);
    CHECK(p.value_d == doctest::Approx(-q.value_d).epsilon(1e-9));

    // Best-response certificate.
    CHECK(exploitability(as_bimatrix(g), p) <= p.epsilon + 1e-12);
    CHECK(p.epsilon <= 1e-9 * (1.0 + scale));
    CHECK(p.value_a == doctest::Approx(-p.value_d).epsilon(1e-9));
  }
}

TEST_CASE("zero-sum: value bracket oracle on random 4x4 integer games") {
  oracle::TestRng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    MatrixGame g;
    g.payoff.assign(m, std::vector<double>(n));
    for (auto& row : g.payoff)
      for (double& v : row) v = rng.uniform_int(-3, 3);
    auto bracket = oracle::zero_sum_value_bracket(g.payoff);
    auto p = solve_zero_sum(g);
    CHECK(bracket.upper - bracket.lower <= 1e-3);
    CHECK(p.value_d >= bracket.lower - 1e-9);
    CHECK(p.value_d <= bracket.upper + 1e-9);
  }
}

TEST_CASE("bimatrix: prisoner's dilemma has the unique defect equilibrium") {
  auto all = enumerate_equilibria(prisoners_dilemma());
  REQUIRE(all.profiles.size() == 1);
  const auto& p = all.profiles[0];
  CHECK(p.strategy_d.weights[1] == doctest::Approx(1.0));
  CHECK(p.strategy_a.weights[1] == doctest::Approx(1.0));
  CHECK(p.value_d == doctest::Approx(1.0));
  CHECK(p.value_a == doctest::Approx(1.0));
}

TEST_CASE("bimatrix: battle of the sexes has three equilibria") {
  auto all = enumerate_equilibria(battle_of_sexes());
  REQUIRE(all.profiles.size() == 3);
  // Find the fully mixed one.
  bool found_mixed = false;
  for (const auto& p : all.profiles) {
    if (p.strategy_d.weights[0] > 1e-9 && p.strategy_d.weights[1] > 1e-9) {
      found_mixed = true;
      CHECK(p.strategy_d.weights[0] == doctest::Approx(2.0 / 3));
      CHECK(p.strategy_d.weights[1] == doctest::Approx(1.0 / 3));
      CHECK(p.strategy_a.weights[0] == doctest::Approx(1.0 / 3));
      CHECK(p.strategy_a.weights[1] == doctest::Approx(2.0 / 3));
    }
  }
  CHECK(found_mixed);

  // Defender-optimal selection picks the (2,1) pure equilibrium.
  auto sel = solve_bimatrix(battle_of_sexes());
  CHECK(sel.value_d == doctest::Approx(2.0));
  CHECK(sel.value_a == doctest::Approx(1.0));
}

TEST_CASE("bimatrix: matching pennies yields exactly one profile") {
  auto all = enumerate_equilibria(as_bimatrix(matching_pennies()));
  CHECK(all.profiles.size() == 1);
}

TEST_CASE("bimatrix: 1x1 game") {
  BimatrixGame g{{{4}}, {{-2}}};
  auto all = enumerate_equilibria(g);
  REQUIRE(all.profiles.size() == 1);
  CHECK(all.profiles[0].value_d == doctest::Approx(4.0));
  CHECK(all.profiles[0].value_a == doctest::Approx(-2.0));
}

TEST_CASE("bimatrix: zero-sum consistency with the LP solver") {
  oracle::TestRng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int m = rng.uniform_int(1, 3), n = rng.uniform_int(1, 3);
    MatrixGame g;
    g.payoff.assign(m, std::vector<double>(n));
    for (auto& row : g.payoff)
      for (double& v : row) v = rng.uniform_int(-3, 3);
    auto lp = solve_zero_sum(g);
    auto se = solve_bimatrix(as_bimatrix(g));
    CHECK(se.value_d == doctest::Approx(lp.value_d).epsilon(1e-9));
  }
}

TEST_CASE("bimatrix: enumeration cap") {
  BimatrixGame g;
  g.payoff_d.assign(70, std::vector<double>(2, 0.0));
  g.payoff_a = g.payoff_d;
  CHECK_THROWS_WITH_AS(enumerate_equilibria(g), doctest::Contains("EnumerationCapExceeded"),
                       Error);
}

TEST_CASE("exploitability: uniform RPS is exact equilibrium") {
  EquilibriumProfile p;
  p.strategy_d.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  p.strategy_a.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(exploitability(as_bimatrix(rock_paper_scissors()), p) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exploitability: exposed pure strategy in matching pennies") {
  EquilibriumProfile p;
  p.strategy_d.weights = {1.0, 0.0};
  p.strategy_a.weights = {0.5, 0.5};
  CHECK(exploitability(as_bimatrix(matching_pennies()), p) == doctest::Approx(1.0));
}

TEST_CASE("fictitious play: matching pennies converges") {
  auto p = fictitious_play(matching_pennies(), 10000);
  CHECK(p.epsilon <= 0.05);
}

TEST_CASE("fictitious play: 1x1 game is exact") {
  auto p = fictitious_play(MatrixGame{{{3}}}, 5);
  CHECK(p.value_d == doctest::Approx(3.0));
  CHECK(p.epsilon == doctest::Approx(0.0));
}

TEST_CASE("fictitious play: RPS frequencies approach uniform") {
  auto p = fictitious_play(rock_paper_scissors(), 100000);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(p.strategy_d.weights[i] - 1.0 / 3) <= 0.05);
    CHECK(std::abs(p.strategy_a.weights[i] - 1.0 / 3) <= 0.05);
  }
}

TEST_CASE("fictitious play: exploitability shrinks with iterations on average") {
  oracle::TestRng rng(4242);
  double short_total = 0.0, long_total = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    MatrixGame g;
    g.payoff.assign(m, std::vector<double>(n));
    for (auto& row : g.payoff)
      for (double& v : row) v = rng.uniform_int(-3, 3);
    short_total += fictitious_play(g, 200).epsilon;
    long_total += fictitious_play(g, 20000).epsilon;
  }
  CHECK(long_total <= short_total);
}
