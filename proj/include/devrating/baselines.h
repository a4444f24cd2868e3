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

#ifndef DEVRATING_BASELINES_H_
#define DEVRATING_BASELINES_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "devrating/game.h"

namespace devrating {

// Average payoff of each strategy against the uniform joint of the others.
std::vector<std::vector<double>> UniformRating(const NormalFormGame& game);

// Pairwise win probabilities: probs(i, j) is the chance that i beats j.
class WinProbMatrix {
 public:
  // Requires a square matrix with entries in [0, 1], 0.5 on the diagonal
  // and probs(i, j) + probs(j, i) = 1 within 1e-9.
  static WinProbMatrix Create(std::vector<std::string> labels,
                              Eigen::MatrixXd probs);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXd& probs() const { return probs_; }

 private:
  WinProbMatrix(std::vector<std::string> labels, Eigen::MatrixXd probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {}

  std::vector<std::string> labels_;
  Eigen::MatrixXd probs_;
};

struct EloConfig {
  double scale = 400.0;
  double base = 10.0;
  // Initial trial step for each backtracking line search; 0 picks a
  // Barzilai-Borwein step from the previous iterate.
  double learning_rate = 0.0;
  int max_iters = 100000;
  // Shift the fitted ratings to mean zero.
  bool anchor = true;
};

void ValidateEloConfig(const EloConfig& config);

struct EloResult {
  std::vector<double> ratings;
  int iterations = 0;
  double gradient_norm = 0.0;
  double loss = 0.0;
};

// Predicted probability that a player rated r_i beats one rated r_j.
double EloWinProbability(double r_i, double r_j, const EloConfig& config = {});

// Cross-entropy (base-10 logarithms) between the observed and predicted
// win probabilities, summed over ordered pairs i != j.
double EloLoss(const WinProbMatrix& wins, std::span<const double> ratings,
               const EloConfig& config = {});

// Fits ratings by full-batch gradient descent with backtracking. Observed
// probabilities are clipped to [1e-6, 1 - 1e-6]. Throws SolverError with
// the final gradient norm if the infinity norm of the gradient does not
// drop below 1e-9 within max_iters.
EloResult EloFit(const WinProbMatrix& wins, const EloConfig& config = {},
                 std::optional<std::vector<double>> initial = std::nullopt);

// Affine map from a margin in [-m, m] to [0, 1].
double PayoffToWinProb(double margin, double m);

// Win probabilities for the first two players of a game whose first two
// players share a strategy set (e.g. the model-vs-model-vs-task game).
// margin(i, j) averages G_0(i, j, ...) over the remaining players' joints
// and is antisymmetrized, (M - M') / 2, which leaves the model vs model vs
// task game unchanged. Mapped through PayoffToWinProb with m = max |margin|.
WinProbMatrix MarginWinProbs(const NormalFormGame& game);

struct NashAveragingResult {
  // ratings[p][a] = expected payoff of a against the opponent's NE.
  std::vector<std::vector<double>> ratings;
  std::vector<std::vector<double>> equilibrium;  // NE strategy per player
  double value = 0.0;                            // player 0's game value
  bool unique = false;
};

// Nash averaging for two-player zero-sum games. Uniqueness is decided by
// bounding every NE coordinate over the optimal face with a pair of LPs.
NashAveragingResult NashAveraging2pzs(const NormalFormGame& game);

}  // namespace devrating

#endif  // DEVRATING_BASELINES_H_
