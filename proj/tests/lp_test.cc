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

#include "devrating/lp.h"

#include <random>

#include "gtest/gtest.h"

namespace devrating {
namespace {

LinearProgram MakeLp(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd c,
                     std::vector<RowSense> sense) {
  return {std::move(a), std::move(b), std::move(c), std::move(sense)};
}

// Checks primal feasibility, dual feasibility and a zero duality gap, which
// together certify optimality independently of the solver's path.
void ExpectOptimalCertificate(const LinearProgram& lp, const LpSolution& sol,
                              double tol) {
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_GE(sol.x.minCoeff(), -tol);
  const Eigen::VectorXd ax = lp.a * sol.x;
  for (int i = 0; i < lp.a.rows(); ++i) {
    switch (lp.sense[i]) {
      case RowSense::kLessEqual:
        EXPECT_LE(ax(i), lp.b(i) + tol);
        EXPECT_LE(sol.duals(i), tol);
        break;
      case RowSense::kGreaterEqual:
        EXPECT_GE(ax(i), lp.b(i) - tol);
        EXPECT_GE(sol.duals(i), -tol);
        break;
      case RowSense::kEqual:
        EXPECT_NEAR(ax(i), lp.b(i), tol);
        break;
    }
  }
  const Eigen::VectorXd reduced = lp.c - lp.a.transpose() * sol.duals;
  EXPECT_GE(reduced.minCoeff(), -tol);
  EXPECT_NEAR(lp.c.dot(sol.x), sol.objective, tol);
  EXPECT_NEAR(lp.b.dot(sol.duals), sol.objective, tol);
}

TEST(SimplexTest, TextbookMaximization) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  const LinearProgram lp = MakeLp(a, Eigen::Vector3d(4, 12, 18),
                                  Eigen::Vector2d(-3, -5),
                                  {RowSense::kLessEqual, RowSense::kLessEqual,
                                   RowSense::kLessEqual});
  const LpSolution sol = SolveLinearProgram(lp);
  ExpectOptimalCertificate(lp, sol, 1e-9);
  EXPECT_NEAR(sol.objective, -36, 1e-9);
  EXPECT_NEAR(sol.x(0), 2, 1e-9);
  EXPECT_NEAR(sol.x(1), 6, 1e-9);
}

TEST(SimplexTest, EqualityAndGreaterRows) {
  // min x + 2y + 3z s.t. x + y + z = 1, y + z >= 0.5.
  Eigen::MatrixXd a(2, 3);
  a << 1, 1, 1, 0, 1, 1;
  const LinearProgram lp =
      MakeLp(a, Eigen::Vector2d(1, 0.5), Eigen::Vector3d(1, 2, 3),
             {RowSense::kEqual, RowSense::kGreaterEqual});
  const LpSolution sol = SolveLinearProgram(lp);
  ExpectOptimalCertificate(lp, sol, 1e-9);
  EXPECT_NEAR(sol.objective, 1.5, 1e-9);
}

TEST(SimplexTest, NegativeRightHandSide) {
  // min x s.t. -x <= -2.
  Eigen::MatrixXd a(1, 1);
  a << -1;
  const LinearProgram lp = MakeLp(a, Eigen::VectorXd::Constant(1, -2),
                                  Eigen::VectorXd::Ones(1),
                                  {RowSense::kLessEqual});
  const LpSolution sol = SolveLinearProgram(lp);
  ExpectOptimalCertificate(lp, sol, 1e-9);
  EXPECT_NEAR(sol.x(0), 2, 1e-9);
}

TEST(SimplexTest, Infeasible) {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  const LinearProgram lp =
      MakeLp(a, Eigen::Vector2d(1, 2), Eigen::VectorXd::Zero(1),
             {RowSense::kLessEqual, RowSense::kGreaterEqual});
  EXPECT_EQ(SolveLinearProgram(lp).status, LpStatus::kInfeasible);
}

TEST(SimplexTest, Unbounded) {
  Eigen::MatrixXd a(1, 2);
  a << 1, -1;
  const LinearProgram lp = MakeLp(a, Eigen::VectorXd::Ones(1),
                                  Eigen::Vector2d(-1, 0),
                                  {RowSense::kLessEqual});
  EXPECT_EQ(SolveLinearProgram(lp).status, LpStatus::kUnbounded);
}

TEST(SimplexTest, RedundantEqualities) {
  // The second equality repeats the first; artificials must be driven out.
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 1, 2, 2, 2, 1, 0, 0;
  const LinearProgram lp = MakeLp(a, Eigen::Vector3d(1, 2, 0.25),
                                  Eigen::Vector3d(0, 1, -1),
                                  {RowSense::kEqual, RowSense::kEqual,
                                   RowSense::kEqual});
  const LpSolution sol = SolveLinearProgram(lp);
  ExpectOptimalCertificate(lp, sol, 1e-9);
  EXPECT_NEAR(sol.objective, -0.75, 1e-9);
}

TEST(SimplexTest, DegenerateKleeMintyStyle) {
  // A highly degenerate LP: many ties at the origin.
  const int n = 12;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 1;
    a(i, (i + 1) % n) = -1;
    a(n + i, i) = 1;
    b(n + i) = 1;
  }
  const LinearProgram lp = MakeLp(a, b, -Eigen::VectorXd::Ones(n),
                                  std::vector<RowSense>(2 * n, RowSense::kLessEqual));
  const LpSolution sol = SolveLinearProgram(lp);
  ExpectOptimalCertificate(lp, sol, 1e-9);
  EXPECT_NEAR(sol.objective, -n, 1e-9);
}

TEST(SimplexTest, RandomMatrixGamesSatisfyDuality) {
  // The value LP of a zero-sum game: min u s.t. A'x <= u, x in simplex,
  // written with u = v - w as two non-negative variables.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uniform(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + trial % 7;
    const int cols = 2 + (trial / 7) % 9;
    Eigen::MatrixXd payoff(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) payoff(i, j) = uniform(rng);
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cols + 1, rows + 2);
    a.topLeftCorner(cols, rows) = payoff.transpose();
    a.block(0, rows, cols, 1).setConstant(-1);
    a.block(0, rows + 1, cols, 1).setConstant(1);
    a.block(cols, 0, 1, rows).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(cols + 1);
    b(cols) = 1;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(rows + 2);
    c(rows) = 1;
    c(rows + 1) = -1;
    std::vector<RowSense> sense(cols, RowSense::kLessEqual);
    sense.push_back(RowSense::kEqual);
    const LinearProgram lp = MakeLp(a, b, c, sense);
    const LpSolution sol = SolveLinearProgram(lp);
    ExpectOptimalCertificate(lp, sol, 1e-8);
    // The column player's strategy is read off the duals.
    const Eigen::VectorXd y = -sol.duals.head(cols);
    EXPECT_NEAR(y.sum(), 1.0, 1e-8);
    EXPECT_GE((payoff * y).minCoeff(), sol.objective - 1e-8);
  }
}

TEST(SimplexTest, IterationLimitIsReported) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  const LinearProgram lp = MakeLp(a, Eigen::Vector3d(4, 12, 18),
                                  Eigen::Vector2d(-3, -5),
                                  {RowSense::kLessEqual, RowSense::kLessEqual,
                                   RowSense::kLessEqual});
  LpOptions options;
  options.max_iterations = 1;
  EXPECT_EQ(SolveLinearProgram(lp, options).status, LpStatus::kIterationLimit);
  EXPECT_EQ(ToString(LpStatus::kOptimal), "optimal");
}

}  // namespace
}  // namespace devrating
