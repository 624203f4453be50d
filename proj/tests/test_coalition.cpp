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

#include <bit>
#include <cmath>

#include "coalition.hpp"
#include "errors.hpp"
#include "oracles.hpp"

using namespace echelon;

namespace {

// Glove game: v(S) = 1 iff S contains player 0 and at least one of {1,2}.
CoalitionGame glove_game() {
  CoalitionGame g;
  g.n_players = 3;
  g.value.assign(8, 0.0);
  for (unsigned mask = 0; mask < 8; ++mask)
    if ((mask & 1u) && (mask & 6u)) g.value[mask] = 1.0;
  return g;
}

CoalitionGame random_game(oracle::TestRng& rng, int n) {
  CoalitionGame g;
  g.n_players = n;
  g.value.assign(std::size_t{1} << n, 0.0);
  for (std::size_t mask = 1; mask < g.value.size(); ++mask)
    g.value[mask] = rng.uniform(-2.0, 4.0);
  return g;
}

}  // namespace

TEST_CASE("shapley: symmetric two-player split") {
  CoalitionGame g{2, {0, 0, 0, 1}};
  auto phi = shapley_value(g);
  CHECK(phi.shares[0] == doctest::Approx(0.5));
  CHECK(phi.shares[1] == doctest::Approx(0.5));
}

TEST_CASE("shapley: glove game matches the permutation oracle") {
  auto g = glove_game();
  auto phi = shapley_value(g);
  CHECK(phi.shares[0] == doctest::Approx(2.0 / 3));
  CHECK(phi.shares[1] == doctest::Approx(1.0 / 6));
  CHECK(phi.shares[2] == doctest::Approx(1.0 / 6));
  auto ref = oracle::shapley_by_permutations(3, g.value);
  for (int i = 0; i < 3; ++i) CHECK(phi.shares[i] == doctest::Approx(ref[i]));
}

TEST_CASE("shapley: additive game returns the singleton values") {
  CoalitionGame g;
  g.n_players = 3;
  g.value.assign(8, 0.0);
  const double c[3] = {1.5, -0.5, 2.0};
  for (unsigned mask = 0; mask < 8; ++mask)
    for (int i = 0; i < 3; ++i)
      if (mask & (1u << i)) g.value[mask] += c[i];
  auto phi = shapley_value(g);
  for (int i = 0; i < 3; ++i) CHECK(phi.shares[i] == doctest::Approx(c[i]));
}

TEST_CASE("shapley: axioms on randomized games") {
  oracle::TestRng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    int n = rng.uniform_int(2, 6);
    auto g = random_game(rng, n);
    auto phi = shapley_value(g);

    // Efficiency.
    double sum = 0.0;
    for (double s : phi.shares) sum += s;
    CHECK(sum == doctest::Approx(g.value.back()).epsilon(1e-9));

    // Agreement with the permutation oracle.
    auto ref = oracle::shapley_by_permutations(n, g.value);
    for (int i = 0; i < n; ++i)
      CHECK(phi.shares[i] == doctest::Approx(ref[i]).epsilon(1e-9));

    // Additivity: shapley(v + w) = shapley(v) + shapley(w).
    auto h = random_game(rng, n);
    CoalitionGame sum_game = g;
    for (std::size_t mask = 0; mask < g.value.size(); ++mask)
      sum_game.value[mask] += h.value[mask];
    auto phi_h = shapley_value(h);
    auto phi_sum = shapley_value(sum_game);
    for (int i = 0; i < n; ++i)
      CHECK(phi_sum.shares[i] == doctest::Approx(phi.shares[i] + phi_h.shares[i]).epsilon(1e-9));
  }
}

TEST_CASE("shapley: dummy player gets zero") {
  // Player 2 contributes nothing to any coalition.
  CoalitionGame g;
  g.n_players = 3;
  g.value.assign(8, 0.0);
  for (unsigned mask = 0; mask < 8; ++mask) {
    unsigned reduced = mask & 3u;
    g.value[mask] = reduced == 3u ? 5.0 : (reduced ? 1.0 : 0.0);
  }
  auto phi = shapley_value(g);
  CHECK(phi.shares[2] == doctest::Approx(0.0));
}

TEST_CASE("shapley: symmetry under player swap") {
  oracle::TestRng rng(13);
  auto g = random_game(rng, 4);
  // Symmetrize players 1 and 2.
  for (unsigned mask = 0; mask < 16; ++mask) {
    unsigned swapped = (mask & ~6u) | ((mask & 2u) << 1) | ((mask & 4u) >> 1);
    if (swapped > mask) {
      double avg = 0.5 * (g.value[mask] + g.value[swapped]);
      g.value[mask] = g.value[swapped] = avg;
    }
  }
  g.value[0] = 0.0;
  auto phi = shapley_value(g);
  CHECK(phi.shares[1] == doctest::Approx(phi.shares[2]).epsilon(1e-9));
}

TEST_CASE("shapley: subset-sum branch agrees with permutations") {
  oracle::TestRng rng(17);
  // Build an 11-player game so the coefficient branch runs, then check a
  // projected 6-player subgame equivalent built both ways.
  auto small = random_game(rng, 7);
  auto phi_perm = oracle::shapley_by_permutations(7, small.value);
  // Embed the 7-player game as 11 players where the extras are dummies.
  CoalitionGame big;
  big.n_players = 11;
  big.value.assign(1u << 11, 0.0);
  for (unsigned mask = 0; mask < (1u << 11); ++mask)
    big.value[mask] = small.value[mask & 127u];
  auto phi_big = shapley_value(big);
  for (int i = 0; i < 7; ++i)
    CHECK(phi_big.shares[i] == doctest::Approx(phi_perm[i]).epsilon(1e-9));
  for (int i = 7; i < 11; ++i) CHECK(phi_big.shares[i] == doctest::Approx(0.0));
}

TEST_CASE("shapley: player cap") {
  CoalitionGame g;
  g.n_players = 17;
  g.value.assign(2, 0.0);
  CHECK_THROWS_WITH_AS(shapley_value(g), doctest::Contains("TooManyPlayers"), Error);
}

TEST_CASE("core: additive game accepts its own vector") {
  CoalitionGame g;
  g.n_players = 3;
  g.value.assign(8, 0.0);
  const double c[3] = {1.0, 2.0, 3.0};
  for (unsigned mask = 0; mask < 8; ++mask)
    for (int i = 0; i < 3; ++i)
      if (mask & (1u << i)) g.value[mask] += c[i];
  auto verdict = core_membership(g, PayoffVector{{1.0, 2.0, 3.0}});
  CHECK(verdict.in_core);
}

TEST_CASE("core: majority game rejects the equal split") {
  CoalitionGame g;
  g.n_players = 3;
  g.value.assign(8, 0.0);
  for (unsigned mask = 1; mask < 8; ++mask)
    if (std::popcount(mask) >= 2) g.value[mask] = 1.0;
  auto verdict = core_membership(g, PayoffVector{{1.0 / 3, 1.0 / 3, 1.0 / 3}});
  CHECK_FALSE(verdict.in_core);
  REQUIRE(verdict.violating_coalition.has_value());
  CHECK(std::popcount(*verdict.violating_coalition) == 2);
  CHECK(verdict.violation == doctest::Approx(1.0 / 3));
}

TEST_CASE("core: verdicts match an independent exhaustive check") {
  oracle::TestRng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 5);
    auto g = random_game(rng, n);
    auto phi = shapley_value(g);
    auto verdict = core_membership(g, phi);

    bool efficient = true;
    double total = 0.0;
    for (double s : phi.shares) total += s;
    if (std::abs(total - g.value.back()) > 1e-9) efficient = false;
    bool ok = efficient;
    for (unsigned mask = 1; ok && mask < g.value.size(); ++mask) {
      double alloc = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) alloc += phi.shares[i];
      if (alloc < g.value[mask] - 1e-9) ok = false;
    }
    CHECK(verdict.in_core == ok);
  }
}

TEST_CASE("policy equilibrium: singleton") {
  CoalitionGame g{1, {0.0, 10.0}};
  auto out = policy_equilibrium(g, 0, {{"op", 1.0}}, BudgetRule{0.0, 1.0}, TechLevel{});
  CHECK(out.budget == doctest::Approx(10.0));
}

TEST_CASE("policy equilibrium: symmetric game arithmetic") {
  CoalitionGame g{2, {0, 0, 0, 1}};
  auto out = policy_equilibrium(g, 0, {{"op", 1.0}}, BudgetRule{5.0, 2.0}, TechLevel{});
  CHECK(out.budget == doctest::Approx(6.0));
}

TEST_CASE("policy equilibrium: glove game budget") {
  auto out = policy_equilibrium(glove_game(), 0, {{"op", 1.0}}, BudgetRule{0.0, 3.0},
                                TechLevel{});
  CHECK(out.budget == doctest::Approx(2.0));
}

TEST_CASE("policy equilibrium: tech multiplier scales the budget") {
  TechLevel tech;
  tech.budget_multiplier = 2.5;
  CoalitionGame g{1, {0.0, 4.0}};
  auto out = policy_equilibrium(g, 0, {}, BudgetRule{1.0, 1.0}, tech);
  CHECK(out.budget == doctest::Approx(1.0 + 4.0 * 2.5));
}

TEST_CASE("policy equilibrium: monotone in defender coalition values") {
  oracle::TestRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.uniform_int(2, 5);
    auto g = random_game(rng, n);
    auto lifted = g;
    for (std::size_t mask = 0; mask < g.value.size(); ++mask)
      if (mask & 1u) lifted.value[mask] += rng.uniform(0.0, 2.0);
    BudgetRule rule{rng.uniform(0.0, 3.0), rng.uniform(0.0, 2.0)};
    auto base = policy_equilibrium(g, 0, {}, rule, TechLevel{});
    auto better = policy_equilibrium(lifted, 0, {}, rule, TechLevel{});
    CHECK(better.budget >= base.budget - 1e-12);
  }
}
