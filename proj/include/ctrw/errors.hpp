// Copyright 2026 ctrw authors.
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

#ifndef CTRW_ERRORS_HPP_
#define CTRW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ctrw {

// Thrown when a truncated series never reaches the requested level; the
// caller must increase the truncation depth K (or the horizon).
class TruncationExhaustedError : public std::runtime_error {
 public:
  explicit TruncationExhaustedError(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when a finite walk is too short to evaluate a position at the
// requested time; the caller must enlarge the walk.
class WalkExhaustedError : public std::runtime_error {
 public:
  explicit WalkExhaustedError(const std::string& what)
      : std::runtime_error(what) {}
};

// Invalid or unsupported experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctrw

#endif  // CTRW_ERRORS_HPP_
