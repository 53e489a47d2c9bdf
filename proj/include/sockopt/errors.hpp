// Copyright 2026 The sockopt Authors
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

#ifndef SOCKOPT_ERRORS_HPP_
#define SOCKOPT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sockopt {

// Bad flags, bad config keys/values, or inconsistent option combinations.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unreadable input data (CSV/JSON files, schema violations).
// The CLI maps this to exit code 3. Parse errors name the offending line.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A size/feasibility guard refused to run (e.g. brute-force instance too
// large). The CLI maps this to exit code 4.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sockopt

#endif  // SOCKOPT_ERRORS_HPP_
