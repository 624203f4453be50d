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

#include "paradox.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "errors.hpp"
#include "linalg.hpp"

namespace echelon {
namespace {

void check_parrondo(const ParrondoSpec& spec) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
      ThrowValidation(std::string("parrondo.") + name, "must be a probability");
  };
  prob(spec.p_a, "p_a");
  prob(spec.p_b_zero, "p_b_zero");
  prob(spec.p_b_other, "p_b_other");
  prob(spec.mix_gamma, "mix_gamma");
  if (spec.modulus < 2) ThrowValidation("parrondo.modulus", "must be >= 2");
}

double win_probability(const ParrondoSpec& spec, ParrondoGame game, int residue) {
  const double pb = residue == 0 ? spec.p_b_zero : spec.p_b_other;
  switch (game) {
    case ParrondoGame::kA:
      return spec.p_a;
    case ParrondoGame::kB:
      return pb;
    case ParrondoGame::kMixed:
      return spec.mix_gamma * spec.p_a + (1.0 - spec.mix_gamma) * pb;
  }
  ThrowInternal("unknown game selector");
}

// States are residues (times schedule phases when `pattern` is nonempty).
// Reducibility check: the win/lose edge graph must be strongly connected.
void check_irreducible(const std::vector<std::vector<Rational>>& p_matrix) {
  const int n = static_cast<int>(p_matrix.size());
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int t = 0; t < n; ++t) {
        const Rational& p = transpose ? p_matrix[t][s] : p_matrix[s][t];
        if (p > 0 && !seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
      }
    }
    return std::count(seen.begin(), seen.end(), true) == n;
  };
  if (!reach(false) || !reach(true))
    ThrowSolver("SingularChain", "capital chain is reducible; no unique stationary law");
}

// Exact stationary distribution of a finite chain: solve pi (P - I) = 0
// with the last equation replaced by sum(pi) = 1.
std::vector<Rational> stationary(const std::vector<std::vector<Rational>>& p_matrix) {
  check_irreducible(p_matrix);
  const int n = static_cast<int>(p_matrix.size());
  std::vector<std::vector<Rational>> sys(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> rhs(n, Rational(0));
  for (int col = 0; col < n - 1; ++col) {
    for (int row = 0; row < n; ++row) {
      sys[col][row] = p_matrix[row][col];
      if (row == col) sys[col][row] -= 1;
    }
  }
  for (int row = 0; row < n; ++row) sys[n - 1][row] = Rational(1);
  rhs[n - 1] = Rational(1);
  auto pi = solve_linear<Rational>(sys, rhs);
  if (!pi) ThrowSolver("SingularChain", "stationary system is singular");
  for (const auto& v : *pi)
    if (v < 0) ThrowSolver("SingularChain", "stationary solve left the simplex");
  return *pi;
}

double drift_from_chain(const std::vector<std::vector<Rational>>& p_matrix,
                        const std::vector<Rational>& win_probs) {
  const auto pi = stationary(p_matrix);
  Rational drift(0);
  for (std::size_t s = 0; s < pi.size(); ++s)
    drift += pi[s] * (2 * win_probs[s] - 1);
  return drift.convert_to<double>();
}

ParrondoGame parse_schedule_token(char c) {
  if (c == 'A' || c == 'a') return ParrondoGame::kA;
  if (c == 'B' || c == 'b') return ParrondoGame::kB;
  ThrowValidation("parrondo.pattern", "schedule may only contain 'A' and 'B'");
}

class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

double simulate_walk(const ParrondoSpec& spec, std::int64_t steps, std::uint64_t seed,
                     const std::vector<ParrondoGame>& schedule, bool random_mix) {
  check_parrondo(spec);
  if (steps < 1) ThrowValidation("parrondo.steps", "must be >= 1");
  UnitSampler rng(seed);
  std::int64_t capital = 0;
  for (std::int64_t t = 0; t < steps; ++t) {
    int residue = static_cast<int>(((capital % spec.modulus) + spec.modulus) % spec.modulus);
    double p;
    if (random_mix) {
      // Resolve the A/B pick explicitly so mixed runs share the walk code.
      const bool play_a = rng.unit() < spec.mix_gamma;
      p = play_a ? spec.p_a : (residue == 0 ? spec.p_b_zero : spec.p_b_other);
    } else {
      p = win_probability(spec, schedule[t % schedule.size()], residue);
    }
    capital += rng.unit() < p ? 1 : -1;
  }
  return static_cast<double>(capital) / static_cast<double>(steps);
}

}  // namespace

double parrondo_drift(const ParrondoSpec& spec, ParrondoGame game) {
  check_parrondo(spec);
  const int m = spec.modulus;
  std::vector<std::vector<Rational>> chain(m, std::vector<Rational>(m, Rational(0)));
  std::vector<Rational> wins(m);
  for (int r = 0; r < m; ++r) {
    const Rational p = Scalar<Rational>::from_double(win_probability(spec, game, r));
    wins[r] = p;
    chain[r][(r + 1) % m] += p;
    chain[r][(r - 1 + m) % m] += 1 - p;
  }
  return drift_from_chain(chain, wins);
}

double parrondo_drift_schedule(const ParrondoSpec& spec, const std::string& pattern) {
  check_parrondo(spec);
  if (pattern.empty()) ThrowValidation("parrondo.pattern", "schedule must be nonempty");
  const int m = spec.modulus;
  const int period = static_cast<int>(pattern.size());
  const int n = m * period;  // state = phase * m + residue
  std::vector<std::vector<Rational>> chain(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> wins(n);
  for (int phase = 0; phase < period; ++phase) {
    const ParrondoGame game = parse_schedule_token(pattern[phase]);
    const int next_phase = (phase + 1) % period;
    for (int r = 0; r < m; ++r) {
      const Rational p = Scalar<Rational>::from_double(win_probability(spec, game, r));
      const int state = phase * m + r;
      wins[state] = p;
      chain[state][next_phase * m + (r + 1) % m] += p;
      chain[state][next_phase * m + (r - 1 + m) % m] += 1 - p;
    }
  }
  return drift_from_chain(chain, wins);
}

double parrondo_simulate(const ParrondoSpec& spec, ParrondoGame game, std::int64_t steps,
                         std::uint64_t seed) {
  if (game == ParrondoGame::kMixed) return simulate_walk(spec, steps, seed, {}, true);
  return simulate_walk(spec, steps, seed, {game}, false);
}

double parrondo_simulate_schedule(const ParrondoSpec& spec, const std::string& pattern,
                                  std::int64_t steps, std::uint64_t seed) {
  if (pattern.empty()) ThrowValidation("parrondo.pattern", "schedule must be nonempty");
  std::vector<ParrondoGame> schedule;
  schedule.reserve(pattern.size());
  for (char c : pattern) schedule.push_back(parse_schedule_token(c));
  return simulate_walk(spec, steps, seed, schedule, false);
}

// ---------------------------------------------------------------------------
// Wardrop equilibrium on enumerated routes
// ---------------------------------------------------------------------------

namespace {

void check_network(const RoutingNetwork& net) {
  if (net.demand <= 0.0) ThrowValidation("routing.demand", "must be positive");
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) index[net.nodes[i]] = i;
  if (!index.count(net.origin) || !index.count(net.destination))
    ThrowValidation("routing", "origin/destination must be declared nodes");
  if (net.origin == net.destination)
    ThrowValidation("routing", "origin and destination must differ");
  for (const auto& link : net.links) {
    if (!index.count(link.from) || !index.count(link.to))
      ThrowValidation("routing.links", "link endpoint is not a declared node");
    if (link.latency_const < 0.0 || link.latency_slope < 0.0)
      ThrowValidation("routing.links", "latency coefficients must be nonnegative");
  }
}

void enumerate_paths(const RoutingNetwork& net, const std::string& at,
                     std::vector<int>& stack, std::vector<bool>& visited,
                     std::map<std::string, int>& node_index,
                     std::vector<std::vector<int>>& out) {
  if (at == net.destination) {
    out.push_back(stack);
    if (static_cast<int>(out.size()) > kMaxRoutes)
      ThrowValidation("routing", "more than " + std::to_string(kMaxRoutes) +
                                     " routes; path enumeration refuses");
    return;
  }
  for (std::size_t e = 0; e < net.links.size(); ++e) {
    if (net.links[e].from != at) continue;
    const int to = node_index[net.links[e].to];
    if (visited[to]) continue;
    visited[to] = true;
    stack.push_back(static_cast<int>(e));
    enumerate_paths(net, net.links[e].to, stack, visited, node_index, out);
    stack.pop_back();
    visited[to] = false;
  }
}

struct RationalNetwork {
  std::vector<Rational> a;  // per link
  std::vector<Rational> b;
};

Rational route_latency(const RationalNetwork& rn, const std::vector<std::vector<int>>& routes,
                       const std::vector<Rational>& flows, int route) {
  // Link flow = sum of flows of routes using the link.
  Rational total(0);
  for (int e : routes[route]) {
    Rational link_flow(0);
    for (std::size_t q = 0; q < routes.size(); ++q)
      for (int eq : routes[q])
        if (eq == e) link_flow += flows[q];
    total += rn.a[e] + rn.b[e] * link_flow;
  }
  return total;
}

}  // namespace

WardropResult wardrop_equilibrium(const RoutingNetwork& net) {
  check_network(net);
  std::map<std::string, int> node_index;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    node_index[net.nodes[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> routes;
  std::vector<int> stack;
  std::vector<bool> visited(net.nodes.size(), false);
  visited[node_index[net.origin]] = true;
  enumerate_paths(net, net.origin, stack, visited, node_index, routes);
  if (routes.empty())
    ThrowValidation("routing", "no route from origin to destination");

  RationalNetwork rn;
  for (const auto& link : net.links) {
    rn.a.push_back(Scalar<Rational>::from_double(link.latency_const));
    rn.b.push_back(Scalar<Rational>::from_double(link.latency_slope));
  }
  const Rational demand = Scalar<Rational>::from_double(net.demand);
  const int r = static_cast<int>(routes.size());

  // Try every nonempty subset of routes as the used set, smallest first, and
  // return the first split satisfying the equilibrium conditions exactly.
  for (int size = 1; size <= r; ++size) {
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
      if (std::popcount(mask) != size) continue;
      std::vector<int> used;
      for (int i = 0; i < r; ++i)
        if (mask & (1u << i)) used.push_back(i);

      // Equal latency across used routes plus total demand.
      const int k = size;
      std::vector<std::vector<Rational>> sys(k + 1, std::vector<Rational>(k + 1, Rational(0)));
      std::vector<Rational> rhs(k + 1, Rational(0));
      for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
          // Coefficient: shared-link congestion between route pair.
          Rational coeff(0);
          for (int e1 : routes[used[row]])
            for (int e2 : routes[used[col]])
              if (e1 == e2) coeff += rn.b[e1];
          sys[row][col] = coeff;
        }
        sys[row][k] = Rational(-1);  // minus the common travel time
        Rational consts(0);
        for (int e : routes[used[row]]) consts += rn.a[e];
        rhs[row] = -consts;
      }
      for (int col = 0; col < k; ++col) sys[k][col] = Rational(1);
      rhs[k] = demand;

      auto sol = solve_linear<Rational>(sys, rhs);
      if (!sol) continue;
      bool feasible = true;
      for (int i = 0; i < k && feasible; ++i)
        if ((*sol)[i] < 0) feasible = false;
      if (!feasible) continue;

      std::vector<Rational> flows(r, Rational(0));
      for (int i = 0; i < k; ++i) flows[used[i]] = (*sol)[i];
      const Rational tau = (*sol)[k];
      for (int p = 0; p < r && feasible; ++p) {
        if (mask & (1u << p)) continue;
        if (route_latency(rn, routes, flows, p) < tau) feasible = false;
      }
      if (!feasible) continue;

      WardropResult out;
      out.routes = routes;
      out.flows.resize(r);
      for (int p = 0; p < r; ++p) out.flows[p] = flows[p].convert_to<double>();
      out.travel_time = tau.convert_to<double>();
      return out;
    }
  }
  ThrowInternal("no Wardrop split found; affine networks always admit one");
}

double wardrop_residual(const RoutingNetwork& net, const WardropResult& result) {
  check_network(net);
  double residual = 0.0;
  double total = 0.0;
  for (double f : result.flows) {
    residual = std::max(residual, std::max(0.0, -f));
    total += f;
  }
  residual = std::max(residual, std::abs(total - net.demand));

  std::vector<double> link_flow(net.links.size(), 0.0);
  for (std::size_t p = 0; p < result.routes.size(); ++p)
    for (int e : result.routes[p]) link_flow[e] += result.flows[p];
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> latency(result.routes.size(), 0.0);
  for (std::size_t p = 0; p < result.routes.size(); ++p) {
    for (int e : result.routes[p])
      latency[p] += net.links[e].latency_const + net.links[e].latency_slope * link_flow[e];
    best = std::min(best, latency[p]);
  }
  for (std::size_t p = 0; p < result.routes.size(); ++p)
    if (result.flows[p] > 1e-12)
      residual = std::max(residual, std::abs(latency[p] - best));
  residual = std::max(residual, std::abs(result.travel_time - best));
  return residual;
}

BraessReport braess_delta(const RoutingNetwork& net) {
  bool has_shortcut = false;
  for (const auto& link : net.links) has_shortcut |= link.shortcut;
  if (!has_shortcut)
    ThrowValidation("routing", "braess_delta requires a flagged shortcut link");

  RoutingNetwork reduced = net;
  reduced.links.clear();
  for (const auto& link : net.links)
    if (!link.shortcut) reduced.links.push_back(link);

  BraessReport report;
  report.without_shortcut = wardrop_equilibrium(reduced);
  report.with_shortcut = wardrop_equilibrium(net);
  report.time_without = report.without_shortcut.travel_time;
  report.time_with = report.with_shortcut.travel_time;
  report.delta = report.time_with - report.time_without;
  return report;
}

RoutingNetwork classic_braess_network(double demand) {
  RoutingNetwork net;
  net.nodes = {"origin", "north", "south", "destination"};
  net.origin = "origin";
  net.destination = "destination";
  net.demand = demand;
  net.links = {
      {"origin", "north", 0.0, 0.01, false},
      {"north", "destination", 45.0, 0.0, false},
      {"origin", "south", 45.0, 0.0, false},
      {"south", "destination", 0.0, 0.01, false},
      {"north", "south", 0.0, 0.0, true},
  };
  return net;
}

}  // namespace echelon
