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

#include "testing/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "Eigen/Dense"

namespace devrating::testing {
namespace {

constexpr double kTol = 1e-9;

std::vector<std::vector<int>> AllJoints(const NormalFormGame& game) {
  std::vector<std::vector<int>> joints;
  std::vector<int> actions(game.num_players(), 0);
  while (true) {
    joints.push_back(actions);
    int p = game.num_players() - 1;
    while (p >= 0 && ++actions[p] == game.num_strategies(p)) {
      actions[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return joints;
}

// Calls `visit` with every k-subset of {0, ..., n-1}.
template <typename Visit>
void ForEachSubset(int n, int k, Visit visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

double PayoffAt(const NormalFormGame& game, int player,
                const std::vector<int>& actions) {
  int64_t index = 0;
  for (int p = 0; p < game.num_players(); ++p) {
    index = index * game.num_strategies(p) + actions[p];
  }
  return game.payoff(player, index);
}

double SummedPairwiseGain(const NormalFormGame& game,
                          const std::vector<double>& sigma, int player,
                          int deviation) {
  const auto joints = AllJoints(game);
  double total = 0.0;
  for (int rec = 0; rec < game.num_strategies(player); ++rec) {
    for (size_t j = 0; j < joints.size(); ++j) {
      if (joints[j][player] != rec) continue;
      std::vector<int> deviated = joints[j];
      deviated[player] = deviation;
      total += sigma[j] * (PayoffAt(game, player, deviated) -
                           PayoffAt(game, player, joints[j]));
    }
  }
  return total;
}

Eigen::MatrixXd NaiveConstraintRows(const NormalFormGame& game) {
  const auto joints = AllJoints(game);
  Eigen::MatrixXd rows(game.total_strategies(), joints.size());
  int row = 0;
  for (int p = 0; p < game.num_players(); ++p) {
    for (int a = 0; a < game.num_strategies(p); ++a, ++row) {
      for (size_t j = 0; j < joints.size(); ++j) {
        std::vector<int> deviated = joints[j];
        deviated[p] = a;
        rows(row, j) =
            PayoffAt(game, p, deviated) - PayoffAt(game, p, joints[j]);
      }
    }
  }
  return rows;
}

std::vector<std::vector<double>> VertexEnumerationRating(
    const NormalFormGame& game) {
  const Eigen::MatrixXd rows = NaiveConstraintRows(game);
  const int num_rows = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  const int dim = n + 1;  // sigma and t
  std::vector<std::optional<double>> frozen(num_rows);

  int unfrozen = num_rows;
  while (unfrozen > 0) {
    // Equalities: simplex sum and frozen rows.
    std::vector<Eigen::VectorXd> eq_rows;
    std::vector<double> eq_rhs;
    Eigen::VectorXd sum_row = Eigen::VectorXd::Zero(dim);
    sum_row.head(n).setOnes();
    eq_rows.push_back(sum_row);
    eq_rhs.push_back(1.0);
    for (int c = 0; c < num_rows; ++c) {
      if (!frozen[c]) continue;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
      r.head(n) = rows.row(c).transpose();
      eq_rows.push_back(r);
      eq_rhs.push_back(*frozen[c]);
    }
    // Inequalities g . z <= h: -sigma_j <= 0 and row_c sigma - t <= 0.
    std::vector<Eigen::VectorXd> ineq_rows;
    std::vector<int> ineq_constraint;  // constraint row, or -1 for sigma >= 0
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
      g(j) = -1.0;
      ineq_rows.push_back(g);
      ineq_constraint.push_back(-1);
    }
    for (int c = 0; c < num_rows; ++c) {
      if (frozen[c]) continue;
      Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
      g.head(n) = rows.row(c).transpose();
      g(n) = -1.0;
      ineq_rows.push_back(g);
      ineq_constraint.push_back(c);
    }

    Eigen::MatrixXd eq(eq_rows.size(), dim);
    for (size_t i = 0; i < eq_rows.size(); ++i) eq.row(i) = eq_rows[i];
    Eigen::FullPivLU<Eigen::MatrixXd> eq_lu(eq);
    eq_lu.setThreshold(1e-10);
    const int eq_rank = static_cast<int>(eq_lu.rank());

    struct Vertex {
      Eigen::VectorXd z;
    };
    std::vector<Vertex> vertices;
    const int num_ineq = static_cast<int>(ineq_rows.size());
    ForEachSubset(num_ineq, dim - eq_rank, [&](const std::vector<int>& pick) {
      const int m = static_cast<int>(eq_rows.size() + pick.size());
      Eigen::MatrixXd system(m, dim);
      Eigen::VectorXd rhs(m);
      int r = 0;
      for (size_t i = 0; i < eq_rows.size(); ++i, ++r) {
        system.row(r) = eq_rows[i];
        rhs(r) = eq_rhs[i];
      }
      for (int i : pick) {
        system.row(r) = ineq_rows[i];
        rhs(r++) = 0.0;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
      lu.setThreshold(1e-10);
      if (lu.rank() != dim) return;
      const Eigen::VectorXd z = lu.solve(rhs);
      if ((system * z - rhs).lpNorm<Eigen::Infinity>() > 1e-8) return;
      for (int i = 0; i < num_ineq; ++i) {
        if (ineq_rows[i].dot(z) > kTol) return;
      }
      vertices.push_back({z});
    });
    if (vertices.empty()) {
      throw std::runtime_error("vertex enumeration found no feasible vertex");
    }

    double best = std::numeric_limits<double>::infinity();
    for (const Vertex& v : vertices) best = std::min(best, v.z(n));
    std::vector<bool> tight_everywhere(num_rows, true);
    for (const Vertex& v : vertices) {
      if (v.z(n) > best + kTol) continue;
      for (int c = 0; c < num_rows; ++c) {
        if (frozen[c]) continue;
        const double gain = rows.row(c).dot(v.z.head(n));
        if (std::fabs(gain - best) > 1e-8) tight_everywhere[c] = false;
      }
    }
    const int before = unfrozen;
    for (int c = 0; c < num_rows; ++c) {
      if (!frozen[c] && tight_everywhere[c]) {
        frozen[c] = best;
        --unfrozen;
      }
    }
    if (unfrozen == before) {
      throw std::runtime_error("no constraint is tight on the optimal face");
    }
  }

  std::vector<std::vector<double>> ratings(game.num_players());
  int row = 0;
  for (int p = 0; p < game.num_players(); ++p) {
    for (int a = 0; a < game.num_strategies(p); ++a) {
      ratings[p].push_back(*frozen[row++]);
    }
  }
  return ratings;
}

}  // namespace devrating::testing
