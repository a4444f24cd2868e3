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

#ifndef DEVRATING_LP_H_
#define DEVRATING_LP_H_

#include <string>
#include <vector>

#include "Eigen/Core"

namespace devrating {

// Dense linear programs of the form
//
//   minimize c'x  subject to  a.row(i) x (<=, =, >=) b(i),  x >= 0.
//
// Solved with a two-phase revised simplex method that keeps an explicit
// basis inverse. Slack and artificial columns are implicit unit vectors, so
// only the structural matrix is stored. Intended for problems with at most a
// few hundred rows and up to ~10^5 columns.

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<RowSense> sense;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string ToString(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-9;
  int max_iterations = 200000;
  int refactor_interval = 64;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 40;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  // Row multipliers y with c - a'y >= 0 on structural columns at optimum.
  // For a minimization, y(i) <= 0 on <= rows and y(i) >= 0 on >= rows.
  Eigen::VectorXd duals;
  int iterations = 0;
};

LpSolution SolveLinearProgram(const LinearProgram& lp,
                              const LpOptions& options = {});

}  // namespace devrating

#endif  // DEVRATING_LP_H_
