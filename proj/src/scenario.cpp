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

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace echelon {

using Json = nlohmann::json;

namespace {

constexpr double kTol = 1e-9;

// --------------------------------------------------------------------------
// Small typed-access layer over nlohmann::json with path-qualified errors.
// --------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& rule) {
  ThrowValidation(path, rule);
}

const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

Json member_or(const Json& obj, const std::string& key, Json fallback) {
  if (obj.is_object() && obj.contains(key)) return obj.at(key);
  return fallback;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double finite_number(const Json& j, const std::string& path) {
  double v = as_number(j, path);
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

std::string identifier(const Json& j, const std::string& path) {
  std::string id = as_string(j, path);
  if (!valid_identifier(id))
    fail(path, "identifier '" + id + "' may only use [A-Za-z0-9_-]");
  return id;
}

void reject_unknown_keys(const Json& obj, const std::set<std::string>& known,
                         const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) fail(path + "." + key, "unknown field");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// --------------------------------------------------------------------------
// Enum names
// --------------------------------------------------------------------------

const std::vector<std::pair<Echelon, std::string>>& echelon_names() {
  static const std::vector<std::pair<Echelon, std::string>> names = {
      {Echelon::kPolicy, "policy"},
      {Echelon::kStrategic, "strategic"},
      {Echelon::kOperational, "operational"},
      {Echelon::kTactical, "tactical"},
      {Echelon::kTechnical, "technical"},
  };
  return names;
}

std::string contest_kind_name(ContestKind kind) {
  return kind == ContestKind::kLottery ? "lottery" : "winner_take_all";
}

ContestKind contest_kind_from(const std::string& name, const std::string& path) {
  if (name == "lottery") return ContestKind::kLottery;
  if (name == "winner_take_all") return ContestKind::kWinnerTakeAll;
  fail(path, "unknown contest kind '" + name + "'");
}

std::string repetition_name(Repetition r) {
  return r == Repetition::kAllowed ? "allowed" : "forbidden";
}

Repetition repetition_from(const std::string& name, const std::string& path) {
  if (name == "allowed") return Repetition::kAllowed;
  if (name == "forbidden") return Repetition::kForbidden;
  fail(path, "repetition must be 'allowed' or 'forbidden'");
}

std::string method_name(StrategicMethod m) {
  return m == StrategicMethod::kExactLp ? "exact_lp" : "fictitious_play";
}

StrategicMethod method_from(const std::string& name, const std::string& path) {
  if (name == "exact_lp") return StrategicMethod::kExactLp;
  if (name == "fictitious_play") return StrategicMethod::kFictitiousPlay;
  fail(path, "unknown strategic method '" + name + "'");
}

}  // namespace

const std::string& to_string(Echelon e) {
  for (const auto& [echelon, name] : echelon_names())
    if (echelon == e) return name;
  ThrowInternal("unmapped echelon");
}

Echelon echelon_from_string(const std::string& name) {
  for (const auto& [echelon, n] : echelon_names())
    if (n == name) return echelon;
  ThrowValidation("echelon", "unknown echelon '" + name + "'");
}

int Scenario::defender_index() const {
  for (std::size_t i = 0; i < coalition.players.size(); ++i)
    if (coalition.players[i] == coalition.defender) return static_cast<int>(i);
  ThrowValidation("coalition.defender", "defender is not a declared player");
}

CoalitionGame Scenario::coalition_game() const {
  const int n = static_cast<int>(coalition.players.size());
  CoalitionGame game;
  game.n_players = n;
  game.value.assign(std::size_t{1} << n, 0.0);

  if (coalition.synergy) {
    const SynergyRule& rule = *coalition.synergy;
    for (unsigned mask = 1; mask < game.value.size(); ++mask) {
      double v = 0.0;
      int size = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          ++size;
          auto it = rule.singletons.find(coalition.players[i]);
          if (it != rule.singletons.end()) v += it->second;
        }
      v += rule.pairwise_bonus * (size * (size - 1) / 2);
      game.value[mask] = v;
    }
    return game;
  }

  for (const auto& [key, v] : coalition.values) {
    unsigned mask = 0;
    for (const std::string& name : split(key, '+')) {
      auto it = std::find(coalition.players.begin(), coalition.players.end(), name);
      mask |= 1u << (it - coalition.players.begin());
    }
    game.value[mask] = v;
  }
  return game;
}

// --------------------------------------------------------------------------
// Parsing
// --------------------------------------------------------------------------

namespace {

ScenarioMetadata parse_metadata(const Json& j) {
  reject_unknown_keys(j, {"name", "description", "notes", "illustrative_numbers",
                          "campaign_stages"},
                      "metadata");
  ScenarioMetadata meta;
  meta.name = as_string(member(j, "name", "metadata"), "metadata.name");
  meta.description = as_string(member_or(j, "description", ""), "metadata.description");
  meta.notes = as_string(member_or(j, "notes", ""), "metadata.notes");
  meta.illustrative_numbers =
      as_bool(member_or(j, "illustrative_numbers", false), "metadata.illustrative_numbers");
  for (const auto& stage : member_or(j, "campaign_stages", Json::array()))
    meta.campaign_stages.push_back(as_string(stage, "metadata.campaign_stages"));
  return meta;
}

CoalitionSection parse_coalition(const Json& j) {
  const std::string path = "coalition";
  reject_unknown_keys(j, {"players", "defender", "values", "synergy", "budget_rule"}, path);
  CoalitionSection out;
  const Json& players = member(j, "players", path);
  if (!players.is_array() || players.empty())
    fail(path + ".players", "need a nonempty player list");
  for (const auto& p : players) out.players.push_back(identifier(p, path + ".players"));
  if (out.players.size() > kMaxCoalitionPlayers)
    fail(path + ".players", "at most 16 players are supported");
  std::set<std::string> unique(out.players.begin(), out.players.end());
  if (unique.size() != out.players.size()) fail(path + ".players", "duplicate player id");

  out.defender = identifier(member(j, "defender", path), path + ".defender");
  if (!unique.count(out.defender))
    fail(path + ".defender", "defender '" + out.defender + "' is not a declared player");

  const bool has_values = j.contains("values");
  const bool has_synergy = j.contains("synergy");
  if (has_values == has_synergy)
    fail(path, "exactly one of 'values' or 'synergy' must be given");
  if (has_values) {
    for (const auto& [key, value] : j.at("values").items()) {
      unsigned mask = 0;
      for (const std::string& name : split(key, '+')) {
        auto it = std::find(out.players.begin(), out.players.end(), name);
        if (it == out.players.end())
          fail(path + ".values." + key, "unknown player '" + name + "'");
        unsigned bit = 1u << (it - out.players.begin());
        if (mask & bit) fail(path + ".values." + key, "player repeated in coalition key");
        mask |= bit;
      }
      // Canonical key: declaration order.
      std::string canonical;
      for (std::size_t i = 0; i < out.players.size(); ++i)
        if (mask & (1u << i)) {
          if (!canonical.empty()) canonical += '+';
          canonical += out.players[i];
        }
      out.values[canonical] = finite_number(value, path + ".values." + key);
    }
  } else {
    const Json& syn = j.at("synergy");
    reject_unknown_keys(syn, {"singletons", "pairwise_bonus"}, path + ".synergy");
    SynergyRule rule;
    for (const auto& [name, value] : member(syn, "singletons", path + ".synergy").items()) {
      if (!unique.count(name))
        fail(path + ".synergy.singletons." + name, "unknown player");
      rule.singletons[name] = finite_number(value, path + ".synergy.singletons." + name);
    }
    rule.pairwise_bonus = finite_number(member_or(syn, "pairwise_bonus", 0.0),
                                        path + ".synergy.pairwise_bonus");
    out.synergy = rule;
  }

  const Json& rule = member(j, "budget_rule", path);
  reject_unknown_keys(rule, {"base", "scale"}, path + ".budget_rule");
  out.budget_rule.base = finite_number(member(rule, "base", path + ".budget_rule"),
                                       path + ".budget_rule.base");
  out.budget_rule.scale = finite_number(member(rule, "scale", path + ".budget_rule"),
                                        path + ".budget_rule.scale");
  if (out.budget_rule.scale < 0.0) fail(path + ".budget_rule.scale", "must be nonnegative");
  return out;
}

StrategicSection parse_strategic(const Json& j) {
  const std::string path = "strategic";
  reject_unknown_keys(j,
                      {"operations", "base_weights", "attacker_budget", "grid_step",
                       "allow_slack", "contests", "value_range", "value_unit",
                       "weight_learning_rate", "method", "fp_iterations"},
                      path);
  StrategicSection out;
  const Json& ops = member(j, "operations", path);
  if (!ops.is_array() || ops.empty()) fail(path + ".operations", "need at least one operation");
  for (const auto& op : ops) out.operations.push_back(identifier(op, path + ".operations"));
  std::set<std::string> unique(out.operations.begin(), out.operations.end());
  if (unique.size() != out.operations.size()) fail(path + ".operations", "duplicate operation");

  double wsum = 0.0;
  for (const auto& [op, w] : member(j, "base_weights", path).items()) {
    if (!unique.count(op)) fail(path + ".base_weights." + op, "unknown operation");
    double weight = finite_number(w, path + ".base_weights." + op);
    if (weight < 0.0) fail(path + ".base_weights." + op, "must be nonnegative");
    out.base_weights[op] = weight;
    wsum += weight;
  }
  if (out.base_weights.size() != out.operations.size())
    fail(path + ".base_weights", "every operation needs a weight");
  if (std::abs(wsum - 1.0) > kTol) fail(path + ".base_weights", "weights must sum to 1");

  out.grid_step = finite_number(member(j, "grid_step", path), path + ".grid_step");
  if (out.grid_step <= 0.0) fail(path + ".grid_step", "must be positive");
  out.attacker_budget =
      finite_number(member(j, "attacker_budget", path), path + ".attacker_budget");
  if (out.attacker_budget < 0.0) fail(path + ".attacker_budget", "must be nonnegative");
  const double units = out.attacker_budget / out.grid_step;
  if (std::abs(units - std::llround(units)) > kTol)
    fail(path + ".attacker_budget", "must be an integer multiple of grid_step");
  out.allow_slack = as_bool(member_or(j, "allow_slack", false), path + ".allow_slack");

  for (const auto& [op, spec] : member(j, "contests", path).items()) {
    if (!unique.count(op)) fail(path + ".contests." + op, "unknown operation");
    reject_unknown_keys(spec, {"kind", "sharpness"}, path + ".contests." + op);
    ContestSpec contest;
    contest.kind = contest_kind_from(
        as_string(member(spec, "kind", path + ".contests." + op), path + ".contests." + op),
        path + ".contests." + op + ".kind");
    contest.sharpness = finite_number(member_or(spec, "sharpness", 1.0),
                                      path + ".contests." + op + ".sharpness");
    if (contest.sharpness <= 0.0)
      fail(path + ".contests." + op + ".sharpness", "must be positive");
    out.contests[op] = contest;
  }
  if (out.contests.size() != out.operations.size())
    fail(path + ".contests", "every operation needs a contest");

  const Json& range = member(j, "value_range", path);
  reject_unknown_keys(range, {"min", "max"}, path + ".value_range");
  out.value_range_min =
      finite_number(member(range, "min", path + ".value_range"), path + ".value_range.min");
  out.value_range_max =
      finite_number(member(range, "max", path + ".value_range"), path + ".value_range.max");
  if (out.value_range_max <= out.value_range_min)
    fail(path + ".value_range", "max must exceed min");

  out.value_unit = finite_number(member_or(j, "value_unit", 1.0), path + ".value_unit");
  out.weight_learning_rate = finite_number(member_or(j, "weight_learning_rate", 0.0),
                                           path + ".weight_learning_rate");
  if (out.weight_learning_rate < 0.0 || out.weight_learning_rate > 1.0)
    fail(path + ".weight_learning_rate", "must lie in [0, 1]");
  out.method = method_from(as_string(member_or(j, "method", "exact_lp"), path + ".method"),
                           path + ".method");
  out.fp_iterations = static_cast<std::int64_t>(
      as_number(member_or(j, "fp_iterations", 100000.0), path + ".fp_iterations"));
  if (out.fp_iterations < 1) fail(path + ".fp_iterations", "must be >= 1");
  return out;
}

OperationalTemplate parse_operational_template(const Json& j, const std::string& path) {
  reject_unknown_keys(j,
                      {"deception", "states", "initial_state", "horizon", "general_sum",
                       "actions_d", "actions_a", "transition", "state_payoff",
                       "context_payoff"},
                      path);
  OperationalTemplate out;
  out.deception = identifier(member(j, "deception", path), path + ".deception");

  const Json& states = member(j, "states", path);
  if (!states.is_array() || states.empty()) fail(path + ".states", "need at least one state");
  for (const auto& s : states) out.states.push_back(identifier(s, path + ".states"));
  std::set<std::string> state_set(out.states.begin(), out.states.end());
  if (state_set.size() != out.states.size()) fail(path + ".states", "duplicate state");

  out.initial_state = identifier(member(j, "initial_state", path), path + ".initial_state");
  if (!state_set.count(out.initial_state)) fail(path + ".initial_state", "unknown state");

  out.horizon = as_int(member(j, "horizon", path), path + ".horizon");
  if (out.horizon < 1 || out.horizon > kMaxHorizon)
    fail(path + ".horizon", "must lie in 1..64");
  out.general_sum = as_bool(member_or(j, "general_sum", false), path + ".general_sum");

  auto parse_actions = [&](const char* key) {
    std::vector<OperationalAction> actions;
    const Json& arr = member(j, key, path);
    if (!arr.is_array() || arr.empty())
      fail(path + "." + key, "need at least one action");
    std::set<std::string> seen;
    for (const auto& a : arr) {
      reject_unknown_keys(a, {"id", "cost"}, path + "." + key);
      OperationalAction action;
      action.id = identifier(member(a, "id", path + "." + key), path + "." + key + ".id");
      action.cost =
          finite_number(member_or(a, "cost", 0.0), path + "." + key + ".cost");
      if (action.cost < 0.0) fail(path + "." + key + ".cost", "must be nonnegative");
      if (!seen.insert(action.id).second)
        fail(path + "." + key, "duplicate action '" + action.id + "'");
      actions.push_back(std::move(action));
    }
    return actions;
  };
  out.actions_d = parse_actions("actions_d");
  out.actions_a = parse_actions("actions_a");

  std::set<std::string> ids_d, ids_a;
  for (const auto& a : out.actions_d) ids_d.insert(a.id);
  for (const auto& a : out.actions_a) ids_a.insert(a.id);

  for (const auto& [state, by_d] : member(j, "transition", path).items()) {
    if (!state_set.count(state)) fail(path + ".transition." + state, "unknown state");
    for (const auto& [ad, by_a] : by_d.items()) {
      if (!ids_d.count(ad))
        fail(path + ".transition." + state + "." + ad, "unknown defender action");
      for (const auto& [aa, row] : by_a.items()) {
        const std::string row_path = path + ".transition." + state + "." + ad + "." + aa;
        if (!ids_a.count(aa)) fail(row_path, "unknown attacker action");
        double sum = 0.0;
        for (const auto& [target, p] : row.items()) {
          if (!state_set.count(target)) fail(row_path + "." + target, "unknown state");
          double prob = finite_number(p, row_path + "." + target);
          if (prob < -kTol) fail(row_path + "." + target, "must be nonnegative");
          out.transition[state][ad][aa][target] = prob;
          sum += prob;
        }
        if (std::abs(sum - 1.0) > kTol)
          fail(row_path, "row sums to " + std::to_string(sum) + ", expected 1");
      }
    }
  }
  // Every (state, action_d, action_a) row must exist.
  for (const auto& s : out.states)
    for (const auto& ad : out.actions_d)
      for (const auto& aa : out.actions_a) {
        auto s_it = out.transition.find(s);
        if (s_it == out.transition.end() || !s_it->second.count(ad.id) ||
            !s_it->second.at(ad.id).count(aa.id))
          fail(path + ".transition." + s + "." + ad.id + "." + aa.id,
               "missing transition row");
      }

  for (const auto& [state, v] : member(j, "state_payoff", path).items()) {
    if (!state_set.count(state)) fail(path + ".state_payoff." + state, "unknown state");
    out.state_payoff[state] = finite_number(v, path + ".state_payoff." + state);
  }
  if (out.state_payoff.size() != out.states.size())
    fail(path + ".state_payoff", "every state needs a payoff");

  out.context_payoff =
      finite_number(member_or(j, "context_payoff", 0.0), path + ".context_payoff");
  return out;
}

TacticalSection parse_tactical_section(const Json& j, const std::string& path,
                                       const OperationalTemplate& tmpl) {
  reject_unknown_keys(j, {"catalog", "rules"}, path);
  TacticalSection out;

  const Json& cat = member(j, "catalog", path);
  reject_unknown_keys(cat,
                      {"tactics_d", "tactics_a", "pair_payoffs", "step_discount",
                       "idle_payoffs_d", "idle_payoffs_a"},
                      path + ".catalog");
  auto parse_tactics = [&](const char* key) {
    std::vector<std::string> tactics;
    std::set<std::string> seen;
    for (const auto& t : member(cat, key, path + ".catalog")) {
      std::string id = identifier(t, path + ".catalog." + key);
      if (id == kIdleTactic)
        fail(path + ".catalog." + key, "'idle' is reserved for sequence padding");
      if (!seen.insert(id).second)
        fail(path + ".catalog." + key, "duplicate tactic '" + id + "'");
      tactics.push_back(std::move(id));
    }
    if (tactics.empty()) fail(path + ".catalog." + key, "need at least one tactic");
    return tactics;
  };
  out.catalog.tactics_d = parse_tactics("tactics_d");
  out.catalog.tactics_a = parse_tactics("tactics_a");
  std::set<std::string> set_d(out.catalog.tactics_d.begin(), out.catalog.tactics_d.end());
  std::set<std::string> set_a(out.catalog.tactics_a.begin(), out.catalog.tactics_a.end());

  out.catalog.step_discount = finite_number(member_or(cat, "step_discount", 1.0),
                                            path + ".catalog.step_discount");
  if (out.catalog.step_discount <= 0.0 || out.catalog.step_discount > 1.0)
    fail(path + ".catalog.step_discount", "must lie in (0, 1]");

  auto parse_pair_payoff = [&](const Json& entry, const std::string& p) {
    reject_unknown_keys(entry, {"d", "a", "payoff"}, p);
    std::string td = as_string(member(entry, "d", p), p + ".d");
    std::string ta = as_string(member(entry, "a", p), p + ".a");
    if (!set_d.count(td)) fail(p, "unknown defender tactic '" + td + "'");
    if (!set_a.count(ta)) fail(p, "unknown attacker tactic '" + ta + "'");
    const Json& payoff = member(entry, "payoff", p);
    if (!payoff.is_array() || payoff.size() != 2)
      fail(p + ".payoff", "expected [defender, attacker]");
    out.catalog.pair_payoff[{td, ta}] = {finite_number(payoff[0], p + ".payoff"),
                                         finite_number(payoff[1], p + ".payoff")};
  };
  const Json& pairs = member(cat, "pair_payoffs", path + ".catalog");
  for (std::size_t i = 0; i < pairs.size(); ++i)
    parse_pair_payoff(pairs[i], path + ".catalog.pair_payoffs[" + std::to_string(i) + "]");
  for (const auto& td : out.catalog.tactics_d)
    for (const auto& ta : out.catalog.tactics_a)
      if (!out.catalog.pair_payoff.count({td, ta}))
        fail(path + ".catalog.pair_payoffs",
             "missing payoff for pair ('" + td + "', '" + ta + "')");

  auto parse_idle = [&](const char* key, const std::set<std::string>& tactic_set,
                        std::map<std::string, std::pair<double, double>>& into) {
    const Json idle = member_or(cat, key, Json::object());
    for (const auto& [tactic, payoff] : idle.items()) {
      const std::string p = path + ".catalog." + key + "." + tactic;
      if (!tactic_set.count(tactic)) fail(p, "unknown tactic");
      if (!payoff.is_array() || payoff.size() != 2)
        fail(p, "expected [defender, attacker]");
      into[tactic] = {finite_number(payoff[0], p), finite_number(payoff[1], p)};
    }
  };
  parse_idle("idle_payoffs_d", set_d, out.catalog.idle_payoff_d);
  parse_idle("idle_payoffs_a", set_a, out.catalog.idle_payoff_a);

  if (!tmpl.general_sum) {
    for (const auto& [pair, payoff] : out.catalog.pair_payoff)
      if (std::abs(payoff.first + payoff.second) > kTol)
        fail(path + ".catalog.pair_payoffs",
             "zero-sum operation requires mirrored payoffs (pair '" + pair.first +
                 "', '" + pair.second + "')");
    for (const auto* idle : {&out.catalog.idle_payoff_d, &out.catalog.idle_payoff_a})
      for (const auto& [tactic, payoff] : *idle)
        if (std::abs(payoff.first + payoff.second) > kTol)
          fail(path + ".catalog", "zero-sum operation requires mirrored idle payoffs ('" +
                                      tactic + "')");
  }

  std::set<std::string> ids_d, ids_a;
  for (const auto& a : tmpl.actions_d) ids_d.insert(a.id);
  for (const auto& a : tmpl.actions_a) ids_a.insert(a.id);

  auto parse_rule = [&](const Json& rj, const std::string& p) {
    reject_unknown_keys(rj, {"allowed_d", "allowed_a", "max_len_d", "max_len_a", "repetition"},
                        p);
    FeasibilityRule rule;
    for (const auto& t : member(rj, "allowed_d", p)) {
      std::string id = as_string(t, p + ".allowed_d");
      if (!set_d.count(id)) fail(p + ".allowed_d", "unknown tactic '" + id + "'");
      rule.allowed_d.push_back(std::move(id));
    }
    for (const auto& t : member(rj, "allowed_a", p)) {
      std::string id = as_string(t, p + ".allowed_a");
      if (!set_a.count(id)) fail(p + ".allowed_a", "unknown tactic '" + id + "'");
      rule.allowed_a.push_back(std::move(id));
    }
    if (rule.allowed_d.empty() || rule.allowed_a.empty())
      fail(p, "allowed tactic sets must be nonempty");
    rule.max_len_d = as_int(member(rj, "max_len_d", p), p + ".max_len_d");
    rule.max_len_a = as_int(member(rj, "max_len_a", p), p + ".max_len_a");
    if (rule.max_len_d < 1 || rule.max_len_a < 1) fail(p, "max lengths must be >= 1");
    rule.repetition =
        repetition_from(as_string(member(rj, "repetition", p), p + ".repetition"),
                        p + ".repetition");
    return rule;
  };

  const Json& rules = member(j, "rules", path);
  reject_unknown_keys(rules, {"default", "by_pair"}, path + ".rules");
  if (rules.contains("default"))
    out.rules.default_rule = parse_rule(rules.at("default"), path + ".rules.default");
  const Json by_pair = member_or(rules, "by_pair", Json::array());
  for (std::size_t i = 0; i < by_pair.size(); ++i) {
    const std::string p = path + ".rules.by_pair[" + std::to_string(i) + "]";
    reject_unknown_keys(by_pair[i], {"d", "a", "rule"}, p);
    std::string ad = as_string(member(by_pair[i], "d", p), p + ".d");
    std::string aa = as_string(member(by_pair[i], "a", p), p + ".a");
    if (!ids_d.count(ad)) fail(p + ".d", "unknown defender action '" + ad + "'");
    if (!ids_a.count(aa)) fail(p + ".a", "unknown attacker action '" + aa + "'");
    out.rules.by_pair[{ad, aa}] = parse_rule(member(by_pair[i], "rule", p), p + ".rule");
  }
  return out;
}

TechLevel parse_tech(const Json& j) {
  const std::string path = "tech";
  reject_unknown_keys(j,
                      {"budget_multiplier", "contest_sharpness", "context_payoff_shift",
                       "action_mask_d", "action_mask_a"},
                      path);
  TechLevel tech;
  tech.budget_multiplier = finite_number(member_or(j, "budget_multiplier", 1.0),
                                         path + ".budget_multiplier");
  if (tech.budget_multiplier <= 0.0) fail(path + ".budget_multiplier", "must be positive");
  tech.contest_sharpness = finite_number(member_or(j, "contest_sharpness", 1.0),
                                         path + ".contest_sharpness");
  if (tech.contest_sharpness <= 0.0) fail(path + ".contest_sharpness", "must be positive");
  tech.context_payoff_shift = finite_number(member_or(j, "context_payoff_shift", 0.0),
                                            path + ".context_payoff_shift");
  auto parse_mask = [&](const char* key) -> std::optional<std::set<std::string>> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    std::set<std::string> mask;
    for (const auto& id : j.at(key)) mask.insert(identifier(id, path + "." + key));
    return mask;
  };
  tech.action_mask_d = parse_mask("action_mask_d");
  tech.action_mask_a = parse_mask("action_mask_a");
  return tech;
}

Thresholds parse_thresholds(const Json& j) {
  const std::string path = "thresholds";
  reject_unknown_keys(j, {"defender", "attacker", "winning_echelons"}, path);
  Thresholds out;
  const Json defender = member_or(j, "defender", Json::object());
  for (const auto& [name, v] : defender.items())
    out.defender[echelon_from_string(name)] = finite_number(v, path + ".defender." + name);
  const Json attacker = member_or(j, "attacker", Json::object());
  for (const auto& [name, v] : attacker.items())
    out.attacker[echelon_from_string(name)] = finite_number(v, path + ".attacker." + name);
  const Json& winning = member(j, "winning_echelons", path);
  if (!winning.is_array() || winning.empty())
    fail(path + ".winning_echelons", "must be a nonempty list");
  for (const auto& e : winning)
    out.winning_echelons.insert(
        echelon_from_string(as_string(e, path + ".winning_echelons")));
  if (!out.winning_echelons.count(Echelon::kPolicy))
    fail(path + ".winning_echelons", "must always contain 'policy'");
  return out;
}

SolverSettings parse_solver(const Json& j) {
  const std::string path = "solver";
  reject_unknown_keys(
      j, {"eta", "tolerance", "max_iterations", "seed", "stability_epsilon"}, path);
  SolverSettings out;
  out.eta = finite_number(member_or(j, "eta", 0.5), path + ".eta");
  if (out.eta <= 0.0 || out.eta > 1.0) fail(path + ".eta", "must lie in (0, 1]");
  out.tolerance = finite_number(member_or(j, "tolerance", 1e-6), path + ".tolerance");
  if (out.tolerance <= 0.0) fail(path + ".tolerance", "must be positive");
  out.max_iterations = as_int(member_or(j, "max_iterations", 200), path + ".max_iterations");
  if (out.max_iterations < 1) fail(path + ".max_iterations", "must be >= 1");
  out.seed = static_cast<std::uint64_t>(
      as_number(member_or(j, "seed", 1.0), path + ".seed"));
  out.stability_epsilon =
      finite_number(member_or(j, "stability_epsilon", 1e-3), path + ".stability_epsilon");
  if (out.stability_epsilon <= 0.0) fail(path + ".stability_epsilon", "must be positive");
  return out;
}

Scenario from_json(const Json& j) {
  reject_unknown_keys(j,
                      {"schema_version", "metadata", "coalition", "strategic", "operational",
                       "tactical", "tech", "thresholds", "shocks", "deviations", "solver"},
                      "document");
  const int version = as_int(member(j, "schema_version", "document"), "schema_version");
  if (version != kSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(version));

  Scenario s;
  s.metadata = parse_metadata(member(j, "metadata", "document"));
  s.coalition = parse_coalition(member(j, "coalition", "document"));
  s.strategic = parse_strategic(member(j, "strategic", "document"));

  std::set<std::string> op_set(s.strategic.operations.begin(), s.strategic.operations.end());
  for (const auto& [op, tmpl] : member(j, "operational", "document").items()) {
    if (!op_set.count(op)) fail("operational." + op, "unknown operation");
    s.operational[op] = parse_operational_template(tmpl, "operational." + op);
  }
  for (const auto& op : s.strategic.operations)
    if (!s.operational.count(op))
      fail("operational." + op, "every operation needs an operational template");

  const Json tactical = member_or(j, "tactical", Json::object());
  for (const auto& [op, section] : tactical.items()) {
    if (!op_set.count(op)) fail("tactical." + op, "unknown operation");
    s.tactical[op] =
        parse_tactical_section(section, "tactical." + op, s.operational.at(op));
  }

  s.tech = parse_tech(member_or(j, "tech", Json::object()));

  // Tech masks must reference real operational actions somewhere.
  auto check_mask = [&](const std::optional<std::set<std::string>>& mask, const char* key,
                        bool defender) {
    if (!mask) return;
    for (const auto& id : *mask) {
      bool found = false;
      for (const auto& [op, tmpl] : s.operational) {
        const auto& actions = defender ? tmpl.actions_d : tmpl.actions_a;
        for (const auto& a : actions) found |= a.id == id;
      }
      if (!found)
        fail(std::string("tech.") + key, "masked action '" + id + "' does not exist");
    }
  };
  check_mask(s.tech.action_mask_d, "action_mask_d", true);
  check_mask(s.tech.action_mask_a, "action_mask_a", false);

  s.thresholds = parse_thresholds(member(j, "thresholds", "document"));

  const Json shocks = member_or(j, "shocks", Json::array());
  for (std::size_t i = 0; i < shocks.size(); ++i) {
    const std::string p = "shocks[" + std::to_string(i) + "]";
    reject_unknown_keys(shocks[i], {"name", "site", "delta"}, p);
    ShockSpec shock;
    shock.name = as_string(member(shocks[i], "name", p), p + ".name");
    shock.site = as_string(member(shocks[i], "site", p), p + ".site");
    shock.delta = finite_number(member(shocks[i], "delta", p), p + ".delta");
    s.shocks.push_back(std::move(shock));
  }

  const Json dev = member_or(j, "deviations", Json::object());
  reject_unknown_keys(dev, {"echelons", "strategic_allocations"}, "deviations");
  for (const auto& e : member_or(dev, "echelons", Json::array()))
    s.deviations.echelons.insert(echelon_from_string(as_string(e, "deviations.echelons")));
  const Json list = member_or(dev, "strategic_allocations", Json("all"));
  if (list.is_string()) {
    if (list.get<std::string>() != "all")
      fail("deviations.strategic_allocations", "expected 'all' or an allocation list");
    s.deviations.strategic_all = true;
  } else {
    s.deviations.strategic_all = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "deviations.strategic_allocations[" + std::to_string(i) + "]";
      Allocation alloc;
      for (const auto& v : list[i]) alloc.push_back(finite_number(v, p));
      if (alloc.size() != s.strategic.operations.size())
        fail(p, "allocation length must match the operation count");
      s.deviations.strategic_allocations.push_back(std::move(alloc));
    }
  }

  s.solver = parse_solver(member_or(j, "solver", Json::object()));

  // Shock sites must resolve.
  for (std::size_t i = 0; i < s.shocks.size(); ++i) parse_site(s, s.shocks[i].site);
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& document) {
  Json j;
  try {
    j = Json::parse(document);
  } catch (const Json::parse_error& e) {
    // Recover line/column from the byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < document.size(); ++i) {
      if (document[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorClass::kValidation, "ParseError",
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                    e.what());
  }
  return from_json(j);
}

// --------------------------------------------------------------------------
// Emission
// --------------------------------------------------------------------------

namespace {

Json metadata_to_json(const ScenarioMetadata& m) {
  Json j;
  j["name"] = m.name;
  j["description"] = m.description;
  j["notes"] = m.notes;
  j["illustrative_numbers"] = m.illustrative_numbers;
  j["campaign_stages"] = m.campaign_stages;
  return j;
}

Json coalition_to_json(const CoalitionSection& c) {
  Json j;
  j["players"] = c.players;
  j["defender"] = c.defender;
  if (c.synergy) {
    Json syn;
    syn["singletons"] = c.synergy->singletons;
    syn["pairwise_bonus"] = c.synergy->pairwise_bonus;
    j["synergy"] = syn;
  } else {
    j["values"] = c.values;
  }
  j["budget_rule"] = {{"base", c.budget_rule.base}, {"scale", c.budget_rule.scale}};
  return j;
}

Json strategic_to_json(const StrategicSection& s) {
  Json j;
  j["operations"] = s.operations;
  j["base_weights"] = s.base_weights;
  j["attacker_budget"] = s.attacker_budget;
  j["grid_step"] = s.grid_step;
  j["allow_slack"] = s.allow_slack;
  Json contests;
  for (const auto& [op, c] : s.contests)
    contests[op] = {{"kind", contest_kind_name(c.kind)}, {"sharpness", c.sharpness}};
  j["contests"] = contests;
  j["value_range"] = {{"min", s.value_range_min}, {"max", s.value_range_max}};
  j["value_unit"] = s.value_unit;
  j["weight_learning_rate"] = s.weight_learning_rate;
  j["method"] = method_name(s.method);
  j["fp_iterations"] = s.fp_iterations;
  return j;
}

Json operational_to_json(const OperationalTemplate& t) {
  Json j;
  j["deception"] = t.deception;
  j["states"] = t.states;
  j["initial_state"] = t.initial_state;
  j["horizon"] = t.horizon;
  j["general_sum"] = t.general_sum;
  auto actions = [](const std::vector<OperationalAction>& list) {
    Json arr = Json::array();
    for (const auto& a : list) arr.push_back({{"id", a.id}, {"cost", a.cost}});
    return arr;
  };
  j["actions_d"] = actions(t.actions_d);
  j["actions_a"] = actions(t.actions_a);
  j["transition"] = t.transition;
  j["state_payoff"] = t.state_payoff;
  j["context_payoff"] = t.context_payoff;
  return j;
}

Json rule_to_json(const FeasibilityRule& r) {
  Json j;
  j["allowed_d"] = r.allowed_d;
  j["allowed_a"] = r.allowed_a;
  j["max_len_d"] = r.max_len_d;
  j["max_len_a"] = r.max_len_a;
  j["repetition"] = repetition_name(r.repetition);
  return j;
}

Json tactical_to_json(const TacticalSection& t) {
  Json cat;
  cat["tactics_d"] = t.catalog.tactics_d;
  cat["tactics_a"] = t.catalog.tactics_a;
  cat["step_discount"] = t.catalog.step_discount;
  Json pairs = Json::array();
  for (const auto& [pair, payoff] : t.catalog.pair_payoff)
    pairs.push_back({{"d", pair.first},
                     {"a", pair.second},
                     {"payoff", {payoff.first, payoff.second}}});
  cat["pair_payoffs"] = pairs;
  Json idle_d = Json::object(), idle_a = Json::object();
  for (const auto& [tactic, payoff] : t.catalog.idle_payoff_d)
    idle_d[tactic] = {payoff.first, payoff.second};
  for (const auto& [tactic, payoff] : t.catalog.idle_payoff_a)
    idle_a[tactic] = {payoff.first, payoff.second};
  cat["idle_payoffs_d"] = idle_d;
  cat["idle_payoffs_a"] = idle_a;

  Json rules;
  if (t.rules.default_rule) rules["default"] = rule_to_json(*t.rules.default_rule);
  Json by_pair = Json::array();
  for (const auto& [pair, rule] : t.rules.by_pair)
    by_pair.push_back({{"d", pair.first}, {"a", pair.second}, {"rule", rule_to_json(rule)}});
  rules["by_pair"] = by_pair;

  Json j;
  j["catalog"] = cat;
  j["rules"] = rules;
  return j;
}

Json tech_to_json(const TechLevel& t) {
  Json j;
  j["budget_multiplier"] = t.budget_multiplier;
  j["contest_sharpness"] = t.contest_sharpness;
  j["context_payoff_shift"] = t.context_payoff_shift;
  j["action_mask_d"] = t.action_mask_d ? Json(*t.action_mask_d) : Json(nullptr);
  j["action_mask_a"] = t.action_mask_a ? Json(*t.action_mask_a) : Json(nullptr);
  return j;
}

Json thresholds_to_json(const Thresholds& t) {
  Json defender = Json::object(), attacker = Json::object();
  for (const auto& [e, v] : t.defender) defender[to_string(e)] = v;
  for (const auto& [e, v] : t.attacker) attacker[to_string(e)] = v;
  Json winning = Json::array();
  for (const auto& e : t.winning_echelons) winning.push_back(to_string(e));
  Json j;
  j["defender"] = defender;
  j["attacker"] = attacker;
  j["winning_echelons"] = winning;
  return j;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["metadata"] = metadata_to_json(s.metadata);
  j["coalition"] = coalition_to_json(s.coalition);
  j["strategic"] = strategic_to_json(s.strategic);
  Json operational = Json::object();
  for (const auto& [op, tmpl] : s.operational) operational[op] = operational_to_json(tmpl);
  j["operational"] = operational;
  Json tactical = Json::object();
  for (const auto& [op, section] : s.tactical) tactical[op] = tactical_to_json(section);
  j["tactical"] = tactical;
  j["tech"] = tech_to_json(s.tech);
  j["thresholds"] = thresholds_to_json(s.thresholds);
  Json shocks = Json::array();
  for (const auto& shock : s.shocks)
    shocks.push_back({{"name", shock.name}, {"site", shock.site}, {"delta", shock.delta}});
  j["shocks"] = shocks;
  Json dev;
  Json echelons = Json::array();
  for (const auto& e : s.deviations.echelons) echelons.push_back(to_string(e));
  dev["echelons"] = echelons;
  if (s.deviations.strategic_all) {
    dev["strategic_allocations"] = "all";
  } else {
    Json list = Json::array();
    for (const auto& alloc : s.deviations.strategic_allocations) list.push_back(alloc);
    dev["strategic_allocations"] = list;
  }
  j["deviations"] = dev;
  j["solver"] = {{"eta", s.solver.eta},
                 {"tolerance", s.solver.tolerance},
                 {"max_iterations", s.solver.max_iterations},
                 {"seed", s.solver.seed},
                 {"stability_epsilon", s.solver.stability_epsilon}};
  return j;
}

}  // namespace

std::string emit_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

bool operator==(const Scenario& a, const Scenario& b) {
  return scenario_to_json(a) == scenario_to_json(b);
}

// --------------------------------------------------------------------------
// Perturbation sites
// --------------------------------------------------------------------------

PerturbationSite parse_site(const Scenario& scenario, const std::string& site) {
  const auto tokens = split(site, '.');
  auto bad = [&](const std::string& why) -> PerturbationSite {
    ThrowValidation("site '" + site + "'", why);
  };
  PerturbationSite out;
  if (tokens.size() == 2 && tokens[0] == "policy" && tokens[1] == "budget") {
    out.kind = PerturbationSite::Kind::kPolicyBudget;
    return out;
  }
  if (tokens.size() == 3 && tokens[0] == "policy" && tokens[1] == "weights") {
    if (!scenario.strategic.base_weights.count(tokens[2]))
      return bad("unknown operation '" + tokens[2] + "'");
    out.kind = PerturbationSite::Kind::kPolicyWeight;
    out.operation = tokens[2];
    return out;
  }
  if (tokens.size() == 3 && tokens[0] == "tech" && tokens[1] == "theta") {
    if (tokens[2] == "budget_multiplier")
      out.kind = PerturbationSite::Kind::kTechBudgetMultiplier;
    else if (tokens[2] == "contest_sharpness")
      out.kind = PerturbationSite::Kind::kTechContestSharpness;
    else if (tokens[2] == "context_payoff_shift")
      out.kind = PerturbationSite::Kind::kTechContextShift;
    else
      return bad("unknown tech field '" + tokens[2] + "'");
    return out;
  }
  if (tokens.size() == 6 && tokens[0] == "tactical" && tokens[2] == "pair_payoff") {
    auto it = scenario.tactical.find(tokens[1]);
    if (it == scenario.tactical.end())
      return bad("no tactical section for operation '" + tokens[1] + "'");
    if (!it->second.catalog.pair_payoff.count({tokens[3], tokens[4]}))
      return bad("unknown tactic pair ('" + tokens[3] + "', '" + tokens[4] + "')");
    if (tokens[5] != "d" && tokens[5] != "a") return bad("side must be 'd' or 'a'");
    out.kind = PerturbationSite::Kind::kTacticalPairPayoff;
    out.operation = tokens[1];
    out.key_a = tokens[3];
    out.key_b = tokens[4];
    out.defender_side = tokens[5] == "d";
    return out;
  }
  if (tokens.size() == 7 && tokens[0] == "operational" && tokens[2] == "transition") {
    auto it = scenario.operational.find(tokens[1]);
    if (it == scenario.operational.end())
      return bad("unknown operation '" + tokens[1] + "'");
    const auto& tmpl = it->second;
    auto s_it = tmpl.transition.find(tokens[3]);
    if (s_it == tmpl.transition.end()) return bad("unknown state '" + tokens[3] + "'");
    auto d_it = s_it->second.find(tokens[4]);
    if (d_it == s_it->second.end())
      return bad("unknown defender action '" + tokens[4] + "'");
    auto a_it = d_it->second.find(tokens[5]);
    if (a_it == d_it->second.end())
      return bad("unknown attacker action '" + tokens[5] + "'");
    if (std::find(tmpl.states.begin(), tmpl.states.end(), tokens[6]) == tmpl.states.end())
      return bad("unknown successor state '" + tokens[6] + "'");
    out.kind = PerturbationSite::Kind::kOperationalTransition;
    out.operation = tokens[1];
    out.key_a = tokens[3];  // state
    out.key_b = tokens[4];  // defender action
    out.key_c = tokens[5];  // attacker action
    out.key_d = tokens[6];  // successor state
    return out;
  }
  return bad("unrecognized site");
}

void apply_perturbation(Scenario& scenario, const PerturbationSite& site, double delta) {
  switch (site.kind) {
    case PerturbationSite::Kind::kPolicyBudget:
      scenario.coalition.budget_rule.base += delta;
      return;
    case PerturbationSite::Kind::kPolicyWeight: {
      auto& weights = scenario.strategic.base_weights;
      weights[site.operation] = std::max(0.0, weights[site.operation] + delta);
      double sum = 0.0;
      for (const auto& [op, w] : weights) sum += w;
      if (sum <= 0.0)
        ThrowValidation("policy.weights", "perturbation zeroed the weight simplex");
      for (auto& [op, w] : weights) w /= sum;
      return;
    }
    case PerturbationSite::Kind::kTechBudgetMultiplier:
      scenario.tech.budget_multiplier += delta;
      if (scenario.tech.budget_multiplier <= 0.0)
        ThrowValidation("tech.theta.budget_multiplier", "perturbation made it nonpositive");
      return;
    case PerturbationSite::Kind::kTechContestSharpness:
      scenario.tech.contest_sharpness += delta;
      if (scenario.tech.contest_sharpness <= 0.0)
        ThrowValidation("tech.theta.contest_sharpness", "perturbation made it nonpositive");
      return;
    case PerturbationSite::Kind::kTechContextShift:
      scenario.tech.context_payoff_shift += delta;
      return;
    case PerturbationSite::Kind::kTacticalPairPayoff: {
      auto& section = scenario.tactical.at(site.operation);
      auto& payoff = section.catalog.pair_payoff.at({site.key_a, site.key_b});
      const bool zero_sum = !scenario.operational.at(site.operation).general_sum;
      if (zero_sum) {
        // Preserve the mirrored structure the zero-sum mode requires.
        const double signed_delta = site.defender_side ? delta : -delta;
        payoff.first += signed_delta;
        payoff.second -= signed_delta;
      } else if (site.defender_side) {
        payoff.first += delta;
      } else {
        payoff.second += delta;
      }
      return;
    }
    case PerturbationSite::Kind::kOperationalTransition: {
      auto& tmpl = scenario.operational.at(site.operation);
      auto& row = tmpl.transition.at(site.key_a).at(site.key_b).at(site.key_c);
      row[site.key_d] = std::max(0.0, row[site.key_d] + delta);
      double sum = 0.0;
      for (const auto& [target, p] : row) sum += p;
      if (sum <= 0.0)
        ThrowValidation("operational.transition", "perturbation zeroed the row");
      for (auto& [target, p] : row) p /= sum;
      return;
    }
  }
}

}  // namespace echelon
