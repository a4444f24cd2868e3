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

#include "devrating/rating.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "devrating/errors.h"
#include "devrating/lp.h"

namespace devrating {
namespace {

constexpr double kBoundSlack = 1e-7;

// Groups identical rows. Returns, for each row, the index of the first row
// equal to it.
std::vector<int> RowRepresentatives(const Eigen::MatrixXd& rows) {
  std::vector<int> rep(rows.rows());
  std::map<std::vector<double>, int> seen;
  for (int i = 0; i < rows.rows(); ++i) {
    std::vector<double> key(rows.cols());
    for (int j = 0; j < rows.cols(); ++j) key[j] = rows(i, j);
    auto [it, inserted] = seen.emplace(std::move(key), i);
    rep[i] = it->second;
  }
  return rep;
}

Eigen::VectorXd NormalizedDistribution(const Eigen::VectorXd& sigma) {
  Eigen::VectorXd out = sigma.cwiseMax(0.0);
  const double total = out.sum();
  if (total > 0) out /= total;
  return out;
}

// Among `candidates` (unfrozen rows at the stage optimum `objective`),
// keeps those that stay tight at every optimal sigma. Each round maximizes
// the total slack of the remaining candidates over the optimal face and
// drops every row that can be made slack; it stops once none can.
std::vector<int> TightAtEveryOptimum(
    const Eigen::MatrixXd& rows, std::span<const std::optional<double>> frozen,
    double objective, std::vector<int> candidates, const SolverConfig& config) {
  const int num_rows = static_cast<int>(rows.rows());
  const int num_cols = static_cast<int>(rows.cols());
  LpOptions options;
  options.feasibility_tol = config.feasibility_tol;
  while (!candidates.empty()) {
    const int k = static_cast<int>(candidates.size());
    std::vector<int> slot(num_rows, -1);
    for (int c = 0; c < k; ++c) slot[candidates[c]] = c;
    LinearProgram lp;
    lp.a = Eigen::MatrixXd::Zero(1 + num_rows + k, num_cols + k);
    lp.b = Eigen::VectorXd::Zero(1 + num_rows + k);
    lp.c = Eigen::VectorXd::Zero(num_cols + k);
    lp.sense.assign(1 + num_rows + k, RowSense::kLessEqual);
    lp.a.row(0).head(num_cols).setOnes();
    lp.b(0) = 1.0;
    lp.sense[0] = RowSense::kEqual;
    for (int i = 0; i < num_rows; ++i) {
      lp.a.row(1 + i).head(num_cols) = rows.row(i);
      if (frozen[i].has_value()) {
        lp.b(1 + i) = *frozen[i];
        lp.sense[1 + i] = RowSense::kEqual;
      } else {
        lp.b(1 + i) = objective;
        if (slot[i] >= 0) lp.a(1 + i, num_cols + slot[i]) = 1.0;
      }
    }
    for (int c = 0; c < k; ++c) {
      lp.a(1 + num_rows + c, num_cols + c) = 1.0;
      lp.b(1 + num_rows + c) = 1.0;
      lp.c(num_cols + c) = -1.0;
    }
    const LpSolution solution = SolveLinearProgram(lp, options);
    if (solution.status != LpStatus::kOptimal) {
      throw SolverError("active-set check failed: " + ToString(solution.status));
    }
    std::vector<int> tight;
    for (int c = 0; c < k; ++c) {
      if (solution.x(num_cols + c) <= config.active_tol) {
        tight.push_back(candidates[c]);
      }
    }
    if (tight.size() == candidates.size()) break;
    candidates = std::move(tight);
  }
  return candidates;
}

}  // namespace

void ValidateConfig(const SolverConfig& config) {
  if (!(config.active_tol > 0) || !(config.feasibility_tol > 0)) {
    throw InputError("solver tolerances must be positive");
  }
  if (config.max_stages < 0) {
    throw InputError("max_stages must be non-negative");
  }
}

StageSolution SolveStage(const Eigen::MatrixXd& rows,
                         std::span<const std::optional<double>> frozen,
                         const SolverConfig& config) {
  const int num_rows = static_cast<int>(rows.rows());
  const int num_cols = static_cast<int>(rows.cols());
  if (static_cast<int>(frozen.size()) != num_rows) {
    throw InputError("frozen set does not match the constraint rows");
  }
  std::vector<int> pinned;
  std::vector<int> free_rows;
  for (int i = 0; i < num_rows; ++i) {
    (frozen[i].has_value() ? pinned : free_rows).push_back(i);
  }
  if (free_rows.empty()) {
    throw InputError("every constraint is already frozen");
  }

  // t = t_max - u with u >= 0, where t_max bounds every free row's gain.
  double t_max = 0.0;
  for (int i : free_rows) t_max = std::max(t_max, rows.row(i).maxCoeff());

  const int m = 1 + static_cast<int>(pinned.size() + free_rows.size());
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(m, num_cols + 1);
  lp.b = Eigen::VectorXd::Zero(m);
  lp.c = Eigen::VectorXd::Zero(num_cols + 1);
  lp.sense.resize(m);
  lp.a.row(0).head(num_cols).setOnes();
  lp.b(0) = 1.0;
  lp.sense[0] = RowSense::kEqual;
  int r = 1;
  for (int i : pinned) {
    lp.a.row(r).head(num_cols) = rows.row(i);
    lp.b(r) = *frozen[i];
    lp.sense[r++] = RowSense::kEqual;
  }
  const int first_free = r;
  for (int i : free_rows) {
    lp.a.row(r).head(num_cols) = rows.row(i);
    lp.a(r, num_cols) = 1.0;
    lp.b(r) = t_max;
    lp.sense[r++] = RowSense::kLessEqual;
  }
  lp.c(num_cols) = -1.0;

  LpOptions options;
  options.feasibility_tol = config.feasibility_tol;
  const LpSolution solution = SolveLinearProgram(lp, options);
  if (solution.status == LpStatus::kInfeasible) {
    std::ostringstream msg;
    msg << "stage LP infeasible with " << pinned.size()
        << " frozen rows {";
    for (size_t k = 0; k < pinned.size(); ++k) {
      msg << (k ? ", " : "") << pinned[k] << "=" << *frozen[pinned[k]];
    }
    msg << "}";
    throw SolverError(msg.str());
  }
  if (solution.status != LpStatus::kOptimal) {
    throw SolverError("stage LP failed: " + ToString(solution.status));
  }

  StageSolution stage;
  stage.sigma = NormalizedDistribution(solution.x.head(num_cols));
  stage.objective = t_max - solution.x(num_cols);
  stage.row_gains = rows * stage.sigma;
  stage.duals = Eigen::VectorXd::Zero(num_rows);
  for (size_t k = 0; k < free_rows.size(); ++k) {
    stage.duals(free_rows[k]) = std::max(0.0, -solution.duals(first_free + k));
  }
  return stage;
}

StageSolution SolveStage(const CceConstraintMatrix& matrix,
                         std::span<const std::optional<double>> frozen,
                         const SolverConfig& config) {
  return SolveStage(matrix.values, frozen, config);
}

std::vector<int> DetectActive(std::span<const double> row_gains,
                              double objective,
                              std::optional<std::span<const double>> duals,
                              std::span<const std::optional<double>> frozen,
                              const SolverConfig& config, double scale) {
  std::vector<int> active;
  const int n = static_cast<int>(row_gains.size());
  if (duals.has_value()) {
    for (int i = 0; i < n; ++i) {
      if (!frozen[i].has_value() && (*duals)[i] > config.active_tol) active.push_back(i);
    }
  }
  if (active.empty()) {
    const double band = config.active_tol * std::max(1.0, scale);
    for (int i = 0; i < n; ++i) {
      if (!frozen[i].has_value() && std::fabs(row_gains[i] - objective) <= band) {
        active.push_back(i);
      }
    }
  }
  if (active.empty()) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (!frozen[i].has_value() && (best < 0 || row_gains[i] > row_gains[best])) best = i;
    }
    if (best >= 0) active.push_back(best);
  }
  return active;
}

RowRating RateConstraintRows(const Eigen::MatrixXd& rows,
                             const SolverConfig& config) {
  ValidateConfig(config);
  const int num_rows = static_cast<int>(rows.rows());
  const int num_cols = static_cast<int>(rows.cols());
  const int max_stages = config.max_stages > 0 ? config.max_stages : num_rows;

  RowRating result;
  result.values.assign(num_rows, 0.0);
  result.sigma = Eigen::VectorXd::Constant(num_cols, 1.0 / num_cols);

  const double magnitude = rows.size() ? rows.cwiseAbs().maxCoeff() : 0.0;
  if (magnitude == 0.0) {
    if (num_rows > 0) {
      std::vector<int> all(num_rows);
      for (int i = 0; i < num_rows; ++i) all[i] = i;
      result.freeze_log.push_back({0, std::move(all), 0.0});
    }
    return result;
  }
  const double scale = config.scale_normalize ? magnitude : 1.0;
  const Eigen::MatrixXd normalized = rows / scale;

  // Identical rows always share a gain; solve with one representative each.
  const std::vector<int> rep = RowRepresentatives(normalized);
  std::vector<int> reps;
  for (int i = 0; i < num_rows; ++i) {
    if (rep[i] == i) reps.push_back(i);
  }
  const int num_reps = static_cast<int>(reps.size());
  Eigen::MatrixXd reduced(num_reps, num_cols);
  for (int k = 0; k < num_reps; ++k) reduced.row(k) = normalized.row(reps[k]);
  std::vector<int> rep_slot(num_rows);
  for (int i = 0; i < num_rows; ++i) {
    rep_slot[i] = static_cast<int>(
        std::find(reps.begin(), reps.end(), rep[i]) - reps.begin());
  }

  std::vector<std::optional<double>> frozen(num_reps);
  auto log_freeze = [&](int iteration, const std::vector<int>& slots,
                        double value) {
    RowFreezeEvent event{iteration, {}, value * scale};
    for (int i = 0; i < num_rows; ++i) {
      if (std::find(slots.begin(), slots.end(), rep_slot[i]) != slots.end()) {
        event.rows.push_back(i);
      }
    }
    result.freeze_log.push_back(std::move(event));
  };

  // Rows that are identically zero have gain 0 under every sigma.
  std::vector<int> zero_slots;
  for (int k = 0; k < num_reps; ++k) {
    if (reduced.row(k).cwiseAbs().maxCoeff() == 0.0) {
      frozen[k] = 0.0;
      zero_slots.push_back(k);
    }
  }
  if (!zero_slots.empty()) log_freeze(0, zero_slots, 0.0);

  int remaining = num_reps - static_cast<int>(zero_slots.size());
  while (remaining > 0) {
    if (result.stage_count >= max_stages) {
      throw SolverError("stage budget of " + std::to_string(max_stages) +
                        " exceeded with " + std::to_string(remaining) +
                        " constraints unfrozen");
    }
    ++result.stage_count;
    const StageSolution stage = SolveStage(reduced, frozen, config);
    std::vector<double> gains(stage.row_gains.data(),
                              stage.row_gains.data() + num_reps);
    std::vector<double> duals(stage.duals.data(),
                              stage.duals.data() + num_reps);
    // Rows with a positive multiplier are tight at every optimum. Rows that
    // are merely tight at this optimum are confirmed with an extra LP.
    const std::vector<int> certain =
        DetectActive(gains, stage.objective, std::span<const double>(duals),
                     frozen, config);
    const std::vector<int> band =
        DetectActive(gains, stage.objective, std::nullopt, frozen, config);
    std::vector<int> unsure;
    for (int k : band) {
      if (duals[k] <= config.active_tol) unsure.push_back(k);
    }
    std::vector<int> active = certain;
    if (!unsure.empty()) {
      for (int k : TightAtEveryOptimum(reduced, frozen, stage.objective,
                                       std::move(unsure), config)) {
        active.push_back(k);
      }
      std::sort(active.begin(), active.end());
      active.erase(std::unique(active.begin(), active.end()), active.end());
    }
    for (int k : active) {
      frozen[k] = stage.objective;
    }
    remaining -= static_cast<int>(active.size());
    log_freeze(result.stage_count, active, stage.objective);
    result.sigma = stage.sigma;
  }

  for (int i = 0; i < num_rows; ++i) {
    result.values[i] = *frozen[rep_slot[i]] * scale;
  }
  return result;
}

RatingResult DeviationRating(const NormalFormGame& game,
                             const SolverConfig& config) {
  const CceConstraintMatrix matrix = BuildCceConstraintMatrix(game);
  RowRating rows = RateConstraintRows(matrix.values, config);

  RatingResult result;
  result.ratings.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    result.ratings[p].resize(game.num_strategies(p));
    for (int a = 0; a < game.num_strategies(p); ++a) {
      result.ratings[p][a] = rows.values[matrix.Row(p, a)];
    }
  }
  const Eigen::VectorXd sigma = NormalizedDistribution(rows.sigma);
  result.equilibrium = JointDistribution::Create(
      std::vector<double>(sigma.data(), sigma.data() + sigma.size()));
  for (const RowFreezeEvent& event : rows.freeze_log) {
    FreezeEvent out{event.iteration, {}, event.objective};
    for (int row : event.rows) out.frozen.push_back(matrix.rows[row]);
    result.freeze_log.push_back(std::move(out));
  }
  result.stage_count = rows.stage_count;
  return result;
}

RatingCertificate CertifyRating(const NormalFormGame& game,
                                const RatingResult& result) {
  RatingCertificate cert;
  const auto gains = CceDeviationGains(game, result.equilibrium);
  const CceConstraintMatrix matrix = BuildCceConstraintMatrix(game);
  double worst = 0.0;
  for (int p = 0; p < game.num_players(); ++p) {
    for (int a = 0; a < game.num_strategies(p); ++a) {
      const double rating = result.ratings[p][a];
      cert.max_gain_error =
          std::max(cert.max_gain_error, std::fabs(gains[p][a] - rating));
      worst = std::max(worst, gains[p][a]);
      const auto row = matrix.values.row(matrix.Row(p, a));
      if (row.cwiseAbs().maxCoeff() > 0.0) ++cert.num_deviations;
      const double lower = row.size() ? row.minCoeff() : 0.0;
      if (rating > kBoundSlack || rating < lower - kBoundSlack) {
        cert.ratings_within_bounds = false;
      }
    }
  }
  cert.cce_violation = worst;
  cert.stage_count = result.stage_count;
  cert.stage_count_within_bound = result.stage_count <= game.total_strategies();
  double previous = 0.0;
  bool first = true;
  for (const FreezeEvent& event : result.freeze_log) {
    if (event.iteration == 0) continue;
    if (!first && event.objective > previous + kBoundSlack) {
      cert.stage_objectives_monotone = false;
    }
    previous = event.objective;
    first = false;
  }
  return cert;
}

}  // namespace devrating
