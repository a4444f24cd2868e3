// Copyright 2026 The Deviation Rating Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEVRATING_ERRORS_H_
#define DEVRATING_ERRORS_H_

#include <stdexcept>
#include <string>

namespace devrating {

// Malformed or inconsistent input: bad shapes, non-finite payoffs, unknown
// labels, invalid distributions, unparsable files.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to produce a trustworthy answer (LP
// infeasibility, stage budget exhausted, non-convergence).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace devrating

#endif  // DEVRATING_ERRORS_H_
