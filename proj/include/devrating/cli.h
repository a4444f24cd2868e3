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

#ifndef DEVRATING_CLI_H_
#define DEVRATING_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace devrating {

inline constexpr char kToolVersion[] = "0.1.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSolverError = 3;
inline constexpr int kExitCheckFailed = 4;

// Runs the command line `args` (without the program name). Subcommands:
// rate, contributions, simulate, check and replay.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Lower-case hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

}  // namespace devrating

#endif  // DEVRATING_CLI_H_
