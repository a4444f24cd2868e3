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

#ifndef DEVRATING_ANALYSIS_H_
#define DEVRATING_ANALYSIS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "devrating/game.h"
#include "devrating/rating.h"

namespace devrating {

// Per-task decomposition of one model player's deviation ratings in the
// model vs model vs task game.
struct ContributionMatrix {
  Eigen::MatrixXd values;  // models x tasks
  int model_player = 0;
  std::vector<std::string> models;
  std::vector<std::string> tasks;
};

// c(m', t) = sum over (m_A, m_B) of sigma*(m_A, m_B, t) times the gain of
// `model_player` from switching to m' at that joint. Rows sum to the
// deviation gains of the supporting equilibrium.
ContributionMatrix TaskContributions(const NormalFormGame& game3p,
                                     const RatingResult& result,
                                     int model_player);

// Averages the game with its image under swapping players p and q:
// G'_p(a) = (G_p(a) + G_q(s(a))) / 2, G'_q likewise, and every other
// player's payoff is averaged over a and s(a).
NormalFormGame SymmetrizePayoffs(const NormalFormGame& game, int p, int q);

// Element-wise Quantize. `decimals` must lie in [1, 15].
std::vector<double> QuantizeAll(std::span<const double> values,
                                int decimals = kPayoffDecimals);

// A constraint matrix whose columns stand for groups of original joints.
struct ReducedConstraintSystem {
  Eigen::MatrixXd matrix;
  std::vector<Deviation> rows;
  // column_groups[c] lists the original joints merged into column c.
  std::vector<std::vector<int64_t>> column_groups;
  int64_t num_joints = 0;

  // Spreads each column's mass uniformly over its group.
  std::vector<double> Expand(const Eigen::VectorXd& reduced_sigma) const;
};

// Merges columns that are identical after 14-decimal quantization.
ReducedConstraintSystem DedupJoints(const CceConstraintMatrix& matrix);

// Replaces every column by the average over its orbit under swapping the
// strategies of players p and q. Exact when the game is symmetric in (p, q):
// a symmetric optimum exists at every stage, so the ratings are unchanged.
CceConstraintMatrix SymmetrizeConstraints(const NormalFormGame& game,
                                          const CceConstraintMatrix& matrix,
                                          int p, int q);

// Deviation ratings computed on the deduplicated (and, for each listed
// pair, symmetrized) constraint system. The equilibrium is expanded back to
// full joints.
RatingResult ReducedDeviationRating(
    const NormalFormGame& game,
    const std::vector<std::pair<int, int>>& symmetric_pairs = {},
    const SolverConfig& config = {});

enum class Property { kClone, kMixture, kOffset, kDominance, kBounds,
                      kPermutation };

std::string ToString(Property property);
// Throws InputError naming the unknown property.
Property ParseProperty(std::string_view name);

using Rater =
    std::function<std::vector<std::vector<double>>(const NormalFormGame&)>;

struct PropertyOptions {
  double tolerance = 1e-6;
  // Offset values are drawn from [-1, 1] unless this is set.
  bool zero_offset = false;
};

struct PropertyReport {
  Property property = Property::kClone;
  // Largest violation of the property's contract, >= 0.
  double max_deviation = 0.0;
  bool passed = false;
  std::string detail;
  // The transformed game that was rated against the original.
  std::optional<NormalFormGame> transformed;
};

PropertyReport CheckProperty(const NormalFormGame& game, Property property,
                             const Rater& rater, uint64_t seed,
                             const PropertyOptions& options = {});

}  // namespace devrating

#endif  // DEVRATING_ANALYSIS_H_
