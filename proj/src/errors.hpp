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

#ifndef ECHELON_ERRORS_HPP_
#define ECHELON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace echelon {

// Error classes map 1:1 onto process exit codes (see the CLI).
enum class ErrorClass {
  kValidation = 1,  // malformed or inconsistent input
  kSolver = 2,      // caps exceeded, non-convergence, singular systems
  kInternal = 3,    // invariant violations inside the engine
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        cls_(cls),
        code_(std::move(code)) {}

  ErrorClass error_class() const { return cls_; }
  // Stable machine-readable tag, e.g. "EnumerationCapExceeded".
  const std::string& code() const { return code_; }

 private:
  ErrorClass cls_;
  std::string code_;
};

[[noreturn]] inline void ThrowValidation(const std::string& path,
                                         const std::string& rule) {
  throw Error(ErrorClass::kValidation, "ValidationError", path + ": " + rule);
}

[[noreturn]] inline void ThrowSolver(const std::string& code,
                                     const std::string& message) {
  throw Error(ErrorClass::kSolver, code, message);
}

[[noreturn]] inline void ThrowInternal(const std::string& message) {
  throw Error(ErrorClass::kInternal, "InternalError", message);
}

}  // namespace echelon

#endif  // ECHELON_ERRORS_HPP_
