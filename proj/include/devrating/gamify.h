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

#ifndef DEVRATING_GAMIFY_H_
#define DEVRATING_GAMIFY_H_

#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "devrating/game.h"

namespace devrating {

// Model-by-task evaluation scores.
class ScoreTable {
 public:
  // Requires finite scores of shape models x tasks and unique labels.
  static ScoreTable Create(std::vector<std::string> models,
                           std::vector<std::string> tasks,
                           Eigen::MatrixXd scores);

  int num_models() const { return static_cast<int>(models_.size()); }
  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  const std::vector<std::string>& models() const { return models_; }
  const std::vector<std::string>& tasks() const { return tasks_; }
  const Eigen::MatrixXd& scores() const { return scores_; }

 private:
  ScoreTable(std::vector<std::string> models, std::vector<std::string> tasks,
             Eigen::MatrixXd scores)
      : models_(std::move(models)),
        tasks_(std::move(tasks)),
        scores_(std::move(scores)) {}

  std::vector<std::string> models_;
  std::vector<std::string> tasks_;
  Eigen::MatrixXd scores_;
};

// Player names of the three-player construction.
inline constexpr char kModelPlayerA[] = "A";
inline constexpr char kModelPlayerB[] = "B";
inline constexpr char kTaskPlayer[] = "T";

// Model vs model vs task: G_A(m_A, m_B, t) = T(m_A, t) - T(m_B, t),
// G_B = -G_A and G_T = |G_A|.
NormalFormGame GameFromTable3p(const ScoreTable& table);

struct NormalizedTable {
  ScoreTable table;
  // Tasks whose scores were constant and were mapped to 0.5.
  std::vector<std::string> constant_tasks;
};

// Maps every task column affinely onto [0, 1]; constant columns become 0.5.
NormalizedTable NormalizePerTask(const ScoreTable& table);

// Agent (over models) vs task (over tasks) zero-sum game. The agent's payoff
// is the score, optionally normalized per task.
NormalFormGame GameFromTable2pzs(const ScoreTable& table, bool normalize);

// K x K symmetric game between mixtures of a symmetric two-player base game:
// G_1(i, j) = x_i' G_1 x_j. Labels default to "x0", "x1", ...
NormalFormGame PopulationGame(const NormalFormGame& base,
                              const std::vector<std::vector<double>>& mixtures,
                              std::vector<std::string> labels = {});

// True iff the game has two players with equal strategy sets and
// G_2(a, b) = G_1(b, a) within `tol`.
bool IsSymmetricTwoPlayer(const NormalFormGame& game, double tol = 1e-9);

}  // namespace devrating

#endif  // DEVRATING_GAMIFY_H_
