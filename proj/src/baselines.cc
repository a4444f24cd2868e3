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

#include "devrating/baselines.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "devrating/errors.h"
#include "devrating/lp.h"

namespace devrating {
namespace {

constexpr double kComplementTol = 1e-9;
constexpr double kClip = 1e-6;
constexpr double kGradientTol = 1e-9;
constexpr double kZeroSumTol = 1e-9;
constexpr double kUniqueTol = 1e-7;

Eigen::VectorXd EloGradient(const Eigen::MatrixXd& observed,
                            const Eigen::VectorXd& r, const EloConfig& config,
                            double* loss) {
  const int n = static_cast<int>(r.size());
  const double k = std::log(config.base) / config.scale;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double z = k * (r(i) - r(j));
      // log p_hat and log(1 - p_hat) without cancellation.
      const double log_p = -std::log1p(std::exp(-z));
      const double log_q = -std::log1p(std::exp(z));
      const double p = observed(i, j);
      total -= p * log_p + (1 - p) * log_q;
      const double residual = p - std::exp(log_p);
      grad(i) -= k * residual;
      grad(j) += k * residual;
    }
  }
  const double to_log10 = 1.0 / std::log(10.0);
  if (loss != nullptr) *loss = total * to_log10;
  return grad * to_log10;
}

// Value LP of the row player of `payoff`: x in simplex maximizing the worst
// column payoff. Optionally restricted to the optimal face (value >= v) and
// optimizing `objective` over it instead.
LpSolution RowPlayerLp(const Eigen::MatrixXd& payoff,
                       std::optional<double> face_value,
                       const Eigen::VectorXd* objective) {
  const int n = static_cast<int>(payoff.rows());
  const int m = static_cast<int>(payoff.cols());
  LinearProgram lp;
  // Variables: x (n), v+ , v-.
  lp.a = Eigen::MatrixXd::Zero(m + 1, n + 2);
  lp.b = Eigen::VectorXd::Zero(m + 1);
  lp.c = Eigen::VectorXd::Zero(n + 2);
  lp.sense.assign(m + 1, RowSense::kLessEqual);
  for (int j = 0; j < m; ++j) {
    lp.a.row(j).head(n) = -payoff.col(j).transpose();
    if (face_value.has_value()) {
      lp.b(j) = -*face_value;
    } else {
      lp.a(j, n) = 1.0;
      lp.a(j, n + 1) = -1.0;
    }
  }
  lp.a.row(m).head(n).setOnes();
  lp.b(m) = 1.0;
  lp.sense[m] = RowSense::kEqual;
  if (objective != nullptr) {
    lp.c.head(n) = *objective;
  } else {
    lp.c(n) = -1.0;
    lp.c(n + 1) = 1.0;
  }
  LpSolution solution = SolveLinearProgram(lp);
  if (solution.status != LpStatus::kOptimal) {
    throw SolverError("zero-sum value LP failed: " + ToString(solution.status));
  }
  return solution;
}

struct PlayerSolve {
  std::vector<double> strategy;
  double value = 0.0;
  bool unique = true;
};

PlayerSolve SolveRowPlayer(const Eigen::MatrixXd& payoff) {
  const int n = static_cast<int>(payoff.rows());
  const LpSolution solution = RowPlayerLp(payoff, std::nullopt, nullptr);
  PlayerSolve out;
  Eigen::VectorXd x = solution.x.head(n).cwiseMax(0.0);
  x /= x.sum();
  out.strategy.assign(x.data(), x.data() + n);
  out.value = solution.x(n) - solution.x(n + 1);
  // Every coordinate is pinned on the optimal face iff the face is a point.
  const double face = out.value - 1e-9 * std::max(1.0, std::fabs(out.value));
  for (int i = 0; i < n && out.unique; ++i) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n + 2);
    unit(i) = 1.0;
    const double low = RowPlayerLp(payoff, face, &unit).objective;
    unit(i) = -1.0;
    const double high = -RowPlayerLp(payoff, face, &unit).objective;
    if (high - low > kUniqueTol) out.unique = false;
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> UniformRating(const NormalFormGame& game) {
  std::vector<std::vector<double>> ratings(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    ratings[p].assign(game.num_strategies(p), 0.0);
    const auto payoffs = game.payoffs(p);
    for (int64_t j = 0; j < game.num_joints(); ++j) {
      ratings[p][game.ActionOf(j, p)] += payoffs[j];
    }
    const double count = static_cast<double>(game.num_opponent_joints(p));
    for (double& r : ratings[p]) r /= count;
  }
  return ratings;
}

WinProbMatrix WinProbMatrix::Create(std::vector<std::string> labels,
                                    Eigen::MatrixXd probs) {
  const int n = static_cast<int>(labels.size());
  if (probs.rows() != n || probs.cols() != n) {
    throw InputError("win-probability matrix must be " + std::to_string(n) +
                     "x" + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = probs(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw InputError("win probability out of [0, 1] at (" +
                         labels[i] + ", " + labels[j] + ")");
      }
      if (std::fabs(v + probs(j, i) - 1.0) > kComplementTol) {
        throw InputError("win probabilities of (" + labels[i] + ", " +
                         labels[j] + ") do not sum to 1");
      }
    }
  }
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("duplicate label in win-probability matrix");
  }
  return WinProbMatrix(std::move(labels), std::move(probs));
}

void ValidateEloConfig(const EloConfig& config) {
  if (!(config.scale > 0)) throw InputError("Elo scale must be positive");
  if (!(config.base > 1)) throw InputError("Elo base must exceed 1");
  if (config.learning_rate < 0) {
    throw InputError("Elo learning rate must be non-negative");
  }
  if (config.max_iters <= 0) throw InputError("Elo max_iters must be positive");
}

double EloWinProbability(double r_i, double r_j, const EloConfig& config) {
  return 1.0 / (1.0 + std::pow(config.base, (r_j - r_i) / config.scale));
}

double EloLoss(const WinProbMatrix& wins, std::span<const double> ratings,
               const EloConfig& config) {
  const Eigen::MatrixXd observed =
      wins.probs().cwiseMax(kClip).cwiseMin(1.0 - kClip);
  const Eigen::VectorXd r =
      Eigen::Map<const Eigen::VectorXd>(ratings.data(), ratings.size());
  double loss = 0.0;
  EloGradient(observed, r, config, &loss);
  return loss;
}

EloResult EloFit(const WinProbMatrix& wins, const EloConfig& config,
                 std::optional<std::vector<double>> initial) {
  ValidateEloConfig(config);
  const int n = wins.size();
  const Eigen::MatrixXd observed =
      wins.probs().cwiseMax(kClip).cwiseMin(1.0 - kClip);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  if (initial.has_value()) {
    if (static_cast<int>(initial->size()) != n) {
      throw InputError("initial Elo ratings have the wrong length");
    }
    r = Eigen::Map<const Eigen::VectorXd>(initial->data(), n);
  }
  // Curvature bound of the loss: each pair contributes at most k^2 / 4.
  const double k = std::log(config.base) / config.scale;
  const double lipschitz = std::max(1, n) * k * k / std::log(10.0);
  double loss = 0.0;
  Eigen::VectorXd grad = EloGradient(observed, r, config, &loss);
  Eigen::VectorXd prev_r = r;
  Eigen::VectorXd prev_grad = grad;
  EloResult result;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    if (n == 0 || grad.lpNorm<Eigen::Infinity>() < kGradientTol) break;
    double step = config.learning_rate > 0 ? config.learning_rate
                                           : 1.0 / lipschitz;
    if (config.learning_rate == 0 && iter > 0) {
      const Eigen::VectorXd s = r - prev_r;
      const Eigen::VectorXd y = grad - prev_grad;
      const double sy = s.dot(y);
      if (sy > 0) step = s.squaredNorm() / sy;
    }
    prev_r = r;
    prev_grad = grad;
    const double slope = grad.squaredNorm();
    double next_loss = 0.0;
    Eigen::VectorXd next_grad;
    while (true) {
      const Eigen::VectorXd trial = prev_r - step * prev_grad;
      next_grad = EloGradient(observed, trial, config, &next_loss);
      if (next_loss <= loss - 1e-4 * step * slope || step < 1e-12 / lipschitz) {
        r = trial;
        break;
      }
      step *= 0.5;
    }
    grad = next_grad;
    loss = next_loss;
  }
  result.gradient_norm = n ? grad.lpNorm<Eigen::Infinity>() : 0.0;
  if (result.gradient_norm >= kGradientTol) {
    std::ostringstream msg;
    msg << "Elo fit did not converge after " << iter
        << " iterations; gradient norm " << result.gradient_norm;
    throw SolverError(msg.str());
  }
  if (config.anchor && n > 0) r.array() -= r.mean();
  result.ratings.assign(r.data(), r.data() + n);
  result.iterations = iter;
  result.loss = loss;
  return result;
}

double PayoffToWinProb(double margin, double m) {
  if (!(m > 0)) throw InputError("margin bound must be positive");
  if (!(std::fabs(margin) <= m)) {
    throw InputError("margin outside [-m, m]");
  }
  return (margin / m + 1.0) / 2.0;
}

WinProbMatrix MarginWinProbs(const NormalFormGame& game) {
  if (game.num_players() < 2 || game.strategies()[0] != game.strategies()[1]) {
    throw InputError(
        "margin win probabilities need two players with the same strategies");
  }
  const int n = game.num_strategies(0);
  Eigen::MatrixXd margin = Eigen::MatrixXd::Zero(n, n);
  const auto payoffs = game.payoffs(0);
  for (int64_t j = 0; j < game.num_joints(); ++j) {
    margin(game.ActionOf(j, 0), game.ActionOf(j, 1)) += payoffs[j];
  }
  margin /= static_cast<double>(game.num_joints() / (int64_t{n} * n));
  margin = 0.5 * (margin - margin.transpose()).eval();
  const double m = margin.cwiseAbs().maxCoeff();
  Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(n, n, 0.5);
  for (int i = 0; i < n && m > 0; ++i) {
    for (int j = i + 1; j < n; ++j) {
      probs(i, j) = PayoffToWinProb(margin(i, j), m);
      probs(j, i) = 1.0 - probs(i, j);
    }
  }
  return WinProbMatrix::Create(game.strategy_labels(0), probs);
}

NashAveragingResult NashAveraging2pzs(const NormalFormGame& game) {
  if (game.num_players() != 2) {
    throw InputError("Nash averaging needs a two-player game");
  }
  for (int64_t j = 0; j < game.num_joints(); ++j) {
    if (std::fabs(game.payoff(0, j) + game.payoff(1, j)) > kZeroSumTol) {
      throw InputError("Nash averaging needs a zero-sum game");
    }
  }
  const int n = game.num_strategies(0);
  const int m = game.num_strategies(1);
  Eigen::MatrixXd g1(n, m);
  Eigen::MatrixXd g2(m, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < m; ++b) {
      g1(a, b) = game.payoff(0, a * m + b);
      g2(b, a) = game.payoff(1, a * m + b);
    }
  }
  const PlayerSolve row = SolveRowPlayer(g1);
  const PlayerSolve col = SolveRowPlayer(g2);
  NashAveragingResult result;
  result.equilibrium = {row.strategy, col.strategy};
  result.value = row.value;
  result.unique = row.unique && col.unique;
  const Eigen::Map<const Eigen::VectorXd> x(row.strategy.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(col.strategy.data(), m);
  const Eigen::VectorXd r1 = g1 * y;
  const Eigen::VectorXd r2 = g2 * x;
  result.ratings = {std::vector<double>(r1.data(), r1.data() + n),
                    std::vector<double>(r2.data(), r2.data() + m)};
  return result;
}

}  // namespace devrating
