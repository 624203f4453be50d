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
#include "oracles.hpp"
#include "paradox.hpp"

using namespace echelon;

// Stationary-solve reference values for the canonical parameter set
// (epsilon = 0.005, modulus 3), frozen from an independent symbolic solve
// of pi P = pi, sum(pi) = 1:
//   drift(A)      = -1/100
//   drift(B)      = -73443/8446300
//   drift(mixed)  = 223/14200
//   drift("AABB") = 232467650483270373/15867555287549271700
//   drift("AB")   = -14568381/2162265100
namespace {
constexpr double kDriftA = -0.01;
constexpr double kDriftB = -73443.0 / 8446300.0;          // ~ -0.0086952866935818
constexpr double kDriftMixed = 223.0 / 14200.0;           // ~ +0.0157042253521127
constexpr double kDriftAabb = 0.014650502000499081;
constexpr double kDriftAb = -14568381.0 / 2162265100.0;   // ~ -0.0067375554459072
}  // namespace

TEST_CASE("parrondo: game A drift is exactly -2*epsilon") {
  auto spec = canonical_parrondo();
  CHECK(parrondo_drift(spec, ParrondoGame::kA) == doctest::Approx(kDriftA).epsilon(1e-12));
}

TEST_CASE("parrondo: game B drift matches the stationary solve") {
  auto spec = canonical_parrondo();
  const double d = parrondo_drift(spec, ParrondoGame::kB);
  CHECK(d == doctest::Approx(kDriftB).epsilon(1e-12));
  CHECK(d < 0.0);
}

TEST_CASE("parrondo: the random mixture flips the sign") {
  auto spec = canonical_parrondo();
  const double d = parrondo_drift(spec, ParrondoGame::kMixed);
  CHECK(d == doctest::Approx(kDriftMixed).epsilon(1e-12));
  CHECK(d > 0.0);
}

TEST_CASE("parrondo: epsilon zero makes game B exactly fair") {
  auto spec = canonical_parrondo(0.0);
  CHECK(parrondo_drift(spec, ParrondoGame::kB) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("parrondo: periodic schedules") {
  auto spec = canonical_parrondo();
  CHECK(parrondo_drift_schedule(spec, "AABB") ==
        doctest::Approx(kDriftAabb).epsilon(1e-12));
  CHECK(parrondo_drift_schedule(spec, "AB") == doctest::Approx(kDriftAb).epsilon(1e-12));
  // Degenerate single-game schedules reduce to the plain drifts.
  CHECK(parrondo_drift_schedule(spec, "A") == doctest::Approx(kDriftA).epsilon(1e-12));
  CHECK(parrondo_drift_schedule(spec, "BB") == doctest::Approx(kDriftB).epsilon(1e-12));
}

TEST_CASE("parrondo: reducible chains are rejected") {
  ParrondoSpec spec = canonical_parrondo();
  spec.p_b_zero = 0.0;
  spec.p_b_other = 1.0;  // capital oscillates without visiting every residue
  CHECK_THROWS_WITH_AS(parrondo_drift(spec, ParrondoGame::kB),
                       doctest::Contains("SingularChain"), Error);
}

TEST_CASE("parrondo: fair coin simulation stays near zero") {
  ParrondoSpec spec = canonical_parrondo(0.0);
  spec.p_a = 0.5;
  const std::int64_t steps = 1000000;
  const double d = parrondo_simulate(spec, ParrondoGame::kA, steps, 99);
  const double se = 1.0 / std::sqrt(static_cast<double>(steps));
  CHECK(std::abs(d) <= 4.0 * se);
}

TEST_CASE("parrondo: simulation agrees with the exact drift") {
  auto spec = canonical_parrondo();
  const std::int64_t steps = 1000000;
  const double se = 1.0 / std::sqrt(static_cast<double>(steps));
  for (auto game : {ParrondoGame::kA, ParrondoGame::kB, ParrondoGame::kMixed}) {
    const double sim = parrondo_simulate(spec, game, steps, 20260809);
    const double exact = parrondo_drift(spec, game);
    CHECK(std::abs(sim - exact) <= 4.0 * se);
  }
  const double sim_sched = parrondo_simulate_schedule(spec, "AABB", steps, 7);
  CHECK(std::abs(sim_sched - kDriftAabb) <= 4.0 * se);
}

TEST_CASE("parrondo: sign of game B matches the simulation") {
  auto spec = canonical_parrondo();
  const double sim = parrondo_simulate(spec, ParrondoGame::kB, 1000000, 5150);
  CHECK(sim < 0.0);
}

TEST_CASE("parrondo: identical seeds reproduce the empirical drift") {
  auto spec = canonical_parrondo();
  CHECK(parrondo_simulate(spec, ParrondoGame::kMixed, 10000, 321) ==
        parrondo_simulate(spec, ParrondoGame::kMixed, 10000, 321));
}

TEST_CASE("wardrop: classic two-route split") {
  auto net = classic_braess_network();
  net.links.pop_back();  // drop the crossover
  auto eq = wardrop_equilibrium(net);
  CHECK(eq.travel_time == doctest::Approx(65.0).epsilon(1e-9));
  CHECK(wardrop_residual(net, eq) <= 1e-9);
  double top = 0.0;
  for (std::size_t p = 0; p < eq.routes.size(); ++p)
    if (eq.flows[p] > 0.0) top = std::max(top, eq.flows[p]);
  CHECK(top == doctest::Approx(2000.0));
}

TEST_CASE("wardrop: crossover drains all flow and raises the time") {
  auto net = classic_braess_network();
  auto eq = wardrop_equilibrium(net);
  CHECK(eq.travel_time == doctest::Approx(80.0).epsilon(1e-9));
  CHECK(wardrop_residual(net, eq) <= 1e-9);
  // The three-link route carries everything.
  for (std::size_t p = 0; p < eq.routes.size(); ++p) {
    if (eq.routes[p].size() == 3)
      CHECK(eq.flows[p] == doctest::Approx(4000.0));
    else
      CHECK(eq.flows[p] == doctest::Approx(0.0));
  }
}

TEST_CASE("wardrop: single route takes all demand") {
  RoutingNetwork net;
  net.nodes = {"o", "t"};
  net.origin = "o";
  net.destination = "t";
  net.demand = 10.0;
  net.links = {{"o", "t", 2.0, 0.5, false}};
  auto eq = wardrop_equilibrium(net);
  CHECK(eq.flows[0] == doctest::Approx(10.0));
  CHECK(eq.travel_time == doctest::Approx(2.0 + 0.5 * 10.0));
}

TEST_CASE("wardrop: disconnected networks are rejected") {
  RoutingNetwork net;
  net.nodes = {"o", "t"};
  net.origin = "o";
  net.destination = "t";
  net.demand = 1.0;
  CHECK_THROWS_WITH_AS(wardrop_equilibrium(net), doctest::Contains("no route"), Error);
}

TEST_CASE("braess: classic fixture reproduces (65, 80, +15)") {
  auto report = braess_delta(classic_braess_network());
  CHECK(report.time_without == doctest::Approx(65.0).epsilon(1e-9));
  CHECK(report.time_with == doctest::Approx(80.0).epsilon(1e-9));
  CHECK(report.delta == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("braess: dominated shortcut changes nothing") {
  auto net = classic_braess_network();
  net.links.back().latency_const = 1e6;
  auto report = braess_delta(net);
  CHECK(report.delta == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("braess: constant-latency networks never lose from extra links") {
  oracle::TestRng rng(2468);
  for (int trial = 0; trial < 20; ++trial) {
    RoutingNetwork net;
    net.nodes = {"o", "m", "t"};
    net.origin = "o";
    net.destination = "t";
    net.demand = 1.0 + rng.uniform_int(1, 9);
    net.links = {
        {"o", "t", double(rng.uniform_int(1, 20)), 0.0, false},
        {"o", "m", double(rng.uniform_int(1, 10)), 0.0, false},
        {"m", "t", double(rng.uniform_int(1, 10)), 0.0, false},
        // Flagged shortcut: a second direct link.
        {"o", "t", double(rng.uniform_int(1, 20)), 0.0, true},
    };
    auto report = braess_delta(net);
    CHECK(report.delta <= 1e-9);
  }
}

TEST_CASE("braess: missing shortcut flag is a validation error") {
  auto net = classic_braess_network();
  for (auto& link : net.links) link.shortcut = false;
  CHECK_THROWS_WITH_AS(braess_delta(net), doctest::Contains("shortcut"), Error);
}
