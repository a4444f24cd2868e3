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

#include "devrating/gamify.h"

#include <cmath>
#include <set>

#include "devrating/errors.h"

namespace devrating {
namespace {

void CheckUnique(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) {
      throw InputError(std::string("duplicate ") + what + " label '" + label +
                       "'");
    }
  }
}

}  // namespace

ScoreTable ScoreTable::Create(std::vector<std::string> models,
                              std::vector<std::string> tasks,
                              Eigen::MatrixXd scores) {
  if (scores.rows() != static_cast<int64_t>(models.size()) ||
      scores.cols() != static_cast<int64_t>(tasks.size())) {
    throw InputError("score table shape does not match its labels");
  }
  CheckUnique(models, "model");
  CheckUnique(tasks, "task");
  for (int i = 0; i < scores.rows(); ++i) {
    for (int j = 0; j < scores.cols(); ++j) {
      if (!std::isfinite(scores(i, j))) {
        throw InputError("non-finite score for model '" + models[i] +
                         "' on task '" + tasks[j] + "'");
      }
    }
  }
  return ScoreTable(std::move(models), std::move(tasks), std::move(scores));
}

NormalFormGame GameFromTable3p(const ScoreTable& table) {
  const int m = table.num_models();
  const int t = table.num_tasks();
  if (m == 0 || t == 0) throw InputError("score table is empty");
  const int64_t joints = int64_t{m} * m * t;
  std::vector<std::vector<double>> payoffs(3, std::vector<double>(joints));
  const Eigen::MatrixXd& s = table.scores();
  int64_t j = 0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int k = 0; k < t; ++k, ++j) {
        const double margin = s(a, k) - s(b, k);
        payoffs[0][j] = margin;
        payoffs[1][j] = -margin;
        payoffs[2][j] = std::fabs(margin);
      }
    }
  }
  return NormalFormGame::Create({kModelPlayerA, kModelPlayerB, kTaskPlayer},
                                {table.models(), table.models(), table.tasks()},
                                std::move(payoffs));
}

NormalizedTable NormalizePerTask(const ScoreTable& table) {
  Eigen::MatrixXd scores = table.scores();
  std::vector<std::string> constant;
  for (int k = 0; k < table.num_tasks(); ++k) {
    if (table.num_models() == 0) break;
    const double low = scores.col(k).minCoeff();
    const double high = scores.col(k).maxCoeff();
    if (high == low) {
      scores.col(k).setConstant(0.5);
      constant.push_back(table.tasks()[k]);
    } else {
      scores.col(k) = (scores.col(k).array() - low) / (high - low);
    }
  }
  return {ScoreTable::Create(table.models(), table.tasks(), std::move(scores)),
          std::move(constant)};
}

NormalFormGame GameFromTable2pzs(const ScoreTable& table, bool normalize) {
  if (table.num_models() == 0 || table.num_tasks() == 0) {
    throw InputError("score table is empty");
  }
  const Eigen::MatrixXd scores =
      normalize ? NormalizePerTask(table).table.scores() : table.scores();
  const int64_t joints = int64_t{table.num_models()} * table.num_tasks();
  std::vector<std::vector<double>> payoffs(2, std::vector<double>(joints));
  int64_t j = 0;
  for (int a = 0; a < table.num_models(); ++a) {
    for (int k = 0; k < table.num_tasks(); ++k, ++j) {
      payoffs[0][j] = scores(a, k);
      payoffs[1][j] = -scores(a, k);
    }
  }
  return NormalFormGame::Create({"agent", "task"},
                                {table.models(), table.tasks()},
                                std::move(payoffs));
}

bool IsSymmetricTwoPlayer(const NormalFormGame& game, double tol) {
  if (game.num_players() != 2 || game.num_strategies(0) != game.num_strategies(1)) {
    return false;
  }
  const int n = game.num_strategies(0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (std::fabs(game.payoff(1, a * n + b) - game.payoff(0, b * n + a)) > tol) {
        return false;
      }
    }
  }
  return true;
}

NormalFormGame PopulationGame(const NormalFormGame& base,
                              const std::vector<std::vector<double>>& mixtures,
                              std::vector<std::string> labels) {
  if (!IsSymmetricTwoPlayer(base)) {
    throw InputError("population game needs a symmetric two-player base game");
  }
  const int n = base.num_strategies(0);
  const int k = static_cast<int>(mixtures.size());
  if (k == 0) throw InputError("population is empty");
  Eigen::MatrixXd x(n, k);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(mixtures[i].size()) != n) {
      throw InputError("mixture " + std::to_string(i) + " has length " +
                       std::to_string(mixtures[i].size()) + ", expected " +
                       std::to_string(n));
    }
    CheckDistribution(mixtures[i], "mixture " + std::to_string(i));
    for (int a = 0; a < n; ++a) x(a, i) = mixtures[i][a];
  }
  const Eigen::MatrixXd g = Eigen::Map<const Eigen::Matrix<
      double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      base.payoffs(0).data(), n, n);
  const Eigen::MatrixXd meta = x.transpose() * g * x;
  std::vector<double> row(int64_t{k} * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) row[i * k + j] = meta(i, j);
  }
  if (labels.empty()) {
    for (int i = 0; i < k; ++i) labels.push_back("x" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != k) {
    throw InputError("population labels do not match the mixtures");
  }
  std::vector<double> column(row.size());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) column[i * k + j] = row[j * k + i];
  }
  return NormalFormGame::Create({}, {labels, labels},
                                {std::move(row), std::move(column)});
}

}  // namespace devrating
