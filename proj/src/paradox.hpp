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
// Exact reproductions of two counterintuitive constructions: capital-
// dependent coin games whose mixture reverses the drift sign, and selfish
// routing where an added link degrades the equilibrium travel time.

#ifndef ECHELON_PARADOX_HPP_
#define ECHELON_PARADOX_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace echelon {

// Game A wins with p_a regardless of capital; game B wins with p_b_zero
// when capital = 0 (mod modulus) and p_b_other otherwise. The canonical
// parameterization is p_a = 1/2 - e, p_b_zero = 1/10 - e,
// p_b_other = 3/4 - e with e = 0.005 and modulus 3.
struct ParrondoSpec {
  double p_a = 0.5 - 0.005;
  int modulus = 3;
  double p_b_zero = 0.1 - 0.005;
  double p_b_other = 0.75 - 0.005;
  double mix_gamma = 0.5;  // probability of playing A in the random mixture
};

enum class ParrondoGame { kA, kB, kMixed };

inline ParrondoSpec canonical_parrondo(double epsilon = 0.005, double gamma = 0.5) {
  ParrondoSpec spec;
  spec.p_a = 0.5 - epsilon;
  spec.p_b_zero = 0.1 - epsilon;
  spec.p_b_other = 0.75 - epsilon;
  spec.modulus = 3;
  spec.mix_gamma = gamma;
  return spec;
}

// Expected capital change per step at stationarity, from the exact
// stationary distribution of the capital-mod-M chain (rational solve, no
// simulation). Throws SingularChain when the chain is reducible.
double parrondo_drift(const ParrondoSpec& spec, ParrondoGame game);

// Drift under a deterministic periodic schedule such as "AABB", computed on
// the period-extended chain over (capital residue, schedule phase).
double parrondo_drift_schedule(const ParrondoSpec& spec, const std::string& pattern);

// Seeded Monte Carlo counterpart; deterministic in the seed.
double parrondo_simulate(const ParrondoSpec& spec, ParrondoGame game,
                         std::int64_t steps, std::uint64_t seed);
double parrondo_simulate_schedule(const ParrondoSpec& spec, const std::string& pattern,
                                  std::int64_t steps, std::uint64_t seed);

// --------------------------------------------------------------------------
// Selfish routing
// --------------------------------------------------------------------------

struct RoutingLink {
  std::string from;
  std::string to;
  double latency_const = 0.0;  // a in a + b * flow
  double latency_slope = 0.0;  // b
  bool shortcut = false;
};

struct RoutingNetwork {
  std::vector<std::string> nodes;
  std::vector<RoutingLink> links;
  std::string origin;
  std::string destination;
  double demand = 0.0;
};

struct WardropResult {
  std::vector<std::vector<int>> routes;  // link indices along each route
  std::vector<double> flows;             // per-route equilibrium flow
  double travel_time = 0.0;              // common time on used routes
};

inline constexpr int kMaxRoutes = 5;

// User-equilibrium flow split: all used routes share the minimal latency.
// Solved exactly on enumerated paths via the equal-latency systems of every
// route subset, checked against the unused-route conditions.
WardropResult wardrop_equilibrium(const RoutingNetwork& net);

// Largest violation of the Wardrop conditions at the given result: flow
// conservation plus used/unused latency optimality. ~0 for a sound result.
double wardrop_residual(const RoutingNetwork& net, const WardropResult& result);

struct BraessReport {
  WardropResult without_shortcut;
  WardropResult with_shortcut;
  double time_without = 0.0;
  double time_with = 0.0;
  double delta = 0.0;
};

// Equilibrium travel times with and without the flagged shortcut links.
BraessReport braess_delta(const RoutingNetwork& net);

// The four-node two-route network (per-route latency flow/100 + 45) plus a
// free crossover link; at demand 4000 the crossover lifts the equilibrium
// time from 65 to 80.
RoutingNetwork classic_braess_network(double demand = 4000.0);

}  // namespace echelon

#endif  // ECHELON_PARADOX_HPP_
