/*
 * Copyright 2026 The torus-match Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace torus_match {

// Bad arguments: out-of-range nodes, odd or undersized dimensions, edge sets
// that are not perfect matchings.
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or invariant-violating matching text.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct precondition_violation : std::logic_error {
  using std::logic_error::logic_error;
};

// A construction produced something its own postconditions reject.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Exhaustive work requested beyond the desk-scale guard.
struct guard_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace torus_match
