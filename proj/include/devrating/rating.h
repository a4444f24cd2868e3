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

#ifndef DEVRATING_RATING_H_
#define DEVRATING_RATING_H_

#include <optional>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "devrating/game.h"

namespace devrating {

// Deviation ratings.
//
// The rating of a deviation (p, a') is its CCE deviation gain at the
// "strictest" equilibrium: repeatedly minimize the largest deviation gain
// among the constraints not yet fixed, then fix (freeze) every constraint
// that attains that minimum at all optimal joints, until every constraint
// is frozen. Each stage is one linear program over the joint simplex:
//
//   minimize t  s.t.  A_u sigma <= t,  A_f sigma = r_f,  sigma in simplex,
//
// where A_u / A_f are the unfrozen / frozen rows of the CCE constraint
// matrix. The gains of frozen rows are unique even when the optimal sigma
// is not, which is what makes the ratings well defined.

struct SolverConfig {
  // Activity threshold on LP duals and on |gain - objective|, in units of
  // the normalized payoff spread.
  double active_tol = 1e-8;
  double feasibility_tol = 1e-9;
  // Stage budget; 0 means the number of constraints (sum_p |A_p|).
  int max_stages = 0;
  // Divide the constraint matrix by its largest magnitude before solving.
  bool scale_normalize = true;
};

void ValidateConfig(const SolverConfig& config);

struct FreezeEvent {
  int iteration = 0;
  std::vector<Deviation> frozen;
  // Stage optimum in original payoff units; every deviation frozen at this
  // stage is rated with this value.
  double objective = 0.0;
};

struct RatingResult {
  // ratings[p][a'] in payoff units.
  std::vector<std::vector<double>> ratings;
  // One supporting equilibrium; not unique in general.
  JointDistribution equilibrium;
  std::vector<FreezeEvent> freeze_log;
  int stage_count = 0;
};

RatingResult DeviationRating(const NormalFormGame& game,
                             const SolverConfig& config = {});

// Row-level engine, shared by the game entry point and by reduced
// (deduplicated / symmetrized) constraint systems. Rows are deviations,
// columns are joint strategies or groups of identical joints.
struct RowFreezeEvent {
  int iteration = 0;
  std::vector<int> rows;
  double objective = 0.0;
};

struct RowRating {
  std::vector<double> values;
  Eigen::VectorXd sigma;
  std::vector<RowFreezeEvent> freeze_log;
  int stage_count = 0;
};

RowRating RateConstraintRows(const Eigen::MatrixXd& rows,
                             const SolverConfig& config = {});

struct StageSolution {
  Eigen::VectorXd sigma;
  double objective = 0.0;
  // rows * sigma for every row, frozen or not.
  Eigen::VectorXd row_gains;
  // Non-negative multipliers of the unfrozen "gain <= t" rows; zero for
  // frozen rows.
  Eigen::VectorXd duals;
};

// Solves one stage. `frozen[i]` holds the value row i is pinned to, or
// nullopt if the row takes part in the max. Throws SolverError when the
// pinned system is infeasible.
StageSolution SolveStage(const Eigen::MatrixXd& rows,
                         std::span<const std::optional<double>> frozen,
                         const SolverConfig& config = {});
StageSolution SolveStage(const CceConstraintMatrix& matrix,
                         std::span<const std::optional<double>> frozen,
                         const SolverConfig& config = {});

// Rows to freeze after a stage. With duals, a row is active iff its
// multiplier exceeds active_tol: a positive multiplier certifies the row is
// tight at every optimum. Without duals, rows within active_tol * scale of
// the objective are active. Never empty while some row is unfrozen: falls
// back to the largest unfrozen gain.
std::vector<int> DetectActive(std::span<const double> row_gains,
                              double objective,
                              std::optional<std::span<const double>> duals,
                              std::span<const std::optional<double>> frozen,
                              const SolverConfig& config, double scale = 1.0);

struct RatingCertificate {
  // max |delta_p(a') - r_p(a')| with gains recomputed from the equilibrium.
  double max_gain_error = 0.0;
  // Smallest epsilon for which the equilibrium is an epsilon-CCE, floored
  // at 0.
  double cce_violation = 0.0;
  // Deviations whose constraint row is not identically zero.
  int num_deviations = 0;
  int stage_count = 0;
  bool stage_count_within_bound = true;
  // Stage objectives never increase: each stage pins more rows and the
  // previous optimum stays feasible.
  bool stage_objectives_monotone = true;
  // 0 >= r >= min_a [G(a', a_-p) - G(a)] with 1e-7 slack.
  bool ratings_within_bounds = true;

  bool Valid(double cce_tol = 1e-7, double gain_tol = 1e-6) const {
    return cce_violation <= cce_tol && max_gain_error <= gain_tol &&
           stage_count_within_bound && stage_objectives_monotone &&
           ratings_within_bounds;
  }
};

RatingCertificate CertifyRating(const NormalFormGame& game,
                                const RatingResult& result);

}  // namespace devrating

#endif  // DEVRATING_RATING_H_
