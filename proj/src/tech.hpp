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

#ifndef ECHELON_TECH_HPP_
#define ECHELON_TECH_HPP_

#include <optional>
#include <set>
#include <string>

namespace echelon {

// Technology level: the numeric parameter vector that modulates every other
// echelon. Acts multiplicatively on budgets and contest sharpness and
// additively on operational context payoffs; the optional masks restrict
// operational action sets by identifier.
struct TechLevel {
  double budget_multiplier = 1.0;
  double contest_sharpness = 1.0;
  double context_payoff_shift = 0.0;
  std::optional<std::set<std::string>> action_mask_d;
  std::optional<std::set<std::string>> action_mask_a;

  bool operator==(const TechLevel&) const = default;
};

}  // namespace echelon

#endif  // ECHELON_TECH_HPP_
