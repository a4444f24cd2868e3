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

#include "devrating/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "devrating/errors.h"
#include "devrating/game_library.h"

namespace devrating {
namespace {

// Joint with the strategies of players p and q exchanged.
int64_t SwapJoint(const NormalFormGame& game, int64_t joint, int p, int q) {
  const int a_p = game.ActionOf(joint, p);
  const int a_q = game.ActionOf(joint, q);
  return game.WithAction(game.WithAction(joint, p, a_q), q, a_p);
}

void CheckSwappable(const NormalFormGame& game, int p, int q) {
  game.CheckPlayer(p);
  game.CheckPlayer(q);
  if (p == q) throw InputError("symmetrization needs two distinct players");
  if (game.num_strategies(p) != game.num_strategies(q)) {
    throw InputError("players " + game.player_name(p) + " and " +
                     game.player_name(q) + " have different strategy counts");
  }
}

uint64_t HashColumn(const double* values, int64_t n) {
  // FNV-1a over the bit patterns.
  uint64_t h = 1469598103934665603ULL;
  for (int64_t i = 0; i < n; ++i) {
    uint64_t bits;
    std::memcpy(&bits, &values[i], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

double MaxAbsDifference(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (size_t p = 0; p < a.size(); ++p) {
    if (a[p].size() != b[p].size()) return INFINITY;
    for (size_t i = 0; i < a[p].size(); ++i) {
      worst = std::max(worst, std::fabs(a[p][i] - b[p][i]));
    }
  }
  return worst;
}

}  // namespace

ContributionMatrix TaskContributions(const NormalFormGame& game3p,
                                     const RatingResult& result,
                                     int model_player) {
  if (game3p.num_players() != 3) {
    throw InputError("task contributions need the three-player game");
  }
  if (model_player != 0 && model_player != 1) {
    throw InputError("model player must be 0 or 1");
  }
  if (result.equilibrium.size() != game3p.num_joints()) {
    throw InputError("rating result does not belong to this game");
  }
  const int p = model_player;
  const int num_models = game3p.num_strategies(p);
  const int num_tasks = game3p.num_strategies(2);
  ContributionMatrix out;
  out.values = Eigen::MatrixXd::Zero(num_models, num_tasks);
  out.model_player = p;
  out.models = game3p.strategy_labels(p);
  out.tasks = game3p.strategy_labels(2);
  const auto g = game3p.payoffs(p);
  for (int64_t j = 0; j < game3p.num_joints(); ++j) {
    const double mass = result.equilibrium[j];
    if (mass == 0.0) continue;
    const int t = game3p.ActionOf(j, 2);
    for (int m = 0; m < num_models; ++m) {
      out.values(m, t) += mass * (g[game3p.WithAction(j, p, m)] - g[j]);
    }
  }
  return out;
}

NormalFormGame SymmetrizePayoffs(const NormalFormGame& game, int p, int q) {
  CheckSwappable(game, p, q);
  std::vector<std::vector<double>> payoffs = game.all_payoffs();
  for (int r = 0; r < game.num_players(); ++r) {
    const int mirror = r == p ? q : (r == q ? p : r);
    const auto source = game.payoffs(mirror);
    const auto own = game.payoffs(r);
    for (int64_t j = 0; j < game.num_joints(); ++j) {
      payoffs[r][j] = 0.5 * (own[j] + source[SwapJoint(game, j, p, q)]);
    }
  }
  return NormalFormGame::Create(game.players(), game.strategies(),
                                std::move(payoffs));
}

std::vector<double> QuantizeAll(std::span<const double> values, int decimals) {
  if (decimals < 1 || decimals > 15) {
    throw InputError("decimals must lie in [1, 15]");
  }
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = Quantize(values[i], decimals);
  return out;
}

std::vector<double> ReducedConstraintSystem::Expand(
    const Eigen::VectorXd& reduced_sigma) const {
  std::vector<double> full(num_joints, 0.0);
  for (size_t c = 0; c < column_groups.size(); ++c) {
    const double share =
        reduced_sigma(c) / static_cast<double>(column_groups[c].size());
    for (int64_t j : column_groups[c]) full[j] = share;
  }
  return full;
}

ReducedConstraintSystem DedupJoints(const CceConstraintMatrix& matrix) {
  const int64_t rows = matrix.values.rows();
  const int64_t cols = matrix.values.cols();
  // Column-major storage makes every column contiguous.
  Eigen::MatrixXd quantized(rows, cols);
  for (int64_t j = 0; j < cols; ++j) {
    for (int64_t i = 0; i < rows; ++i) {
      quantized(i, j) = Quantize(matrix.values(i, j));
    }
  }
  ReducedConstraintSystem out;
  out.rows = matrix.rows;
  out.num_joints = cols;
  std::vector<int64_t> representative;
  std::unordered_map<uint64_t, std::vector<int>> buckets;
  for (int64_t j = 0; j < cols; ++j) {
    const double* column = quantized.col(j).data();
    std::vector<int>& bucket = buckets[HashColumn(column, rows)];
    int group = -1;
    for (int c : bucket) {
      if (std::equal(column, column + rows,
                     quantized.col(representative[c]).data())) {
        group = c;
        break;
      }
    }
    if (group < 0) {
      group = static_cast<int>(representative.size());
      representative.push_back(j);
      out.column_groups.emplace_back();
      bucket.push_back(group);
    }
    out.column_groups[group].push_back(j);
  }
  out.matrix.resize(rows, static_cast<int64_t>(representative.size()));
  for (size_t c = 0; c < representative.size(); ++c) {
    out.matrix.col(c) = quantized.col(representative[c]);
  }
  return out;
}

CceConstraintMatrix SymmetrizeConstraints(const NormalFormGame& game,
                                          const CceConstraintMatrix& matrix,
                                          int p, int q) {
  CheckSwappable(game, p, q);
  CceConstraintMatrix out = matrix;
  for (int64_t j = 0; j < game.num_joints(); ++j) {
    const int64_t s = SwapJoint(game, j, p, q);
    if (s <= j) continue;
    const Eigen::VectorXd mean = 0.5 * (matrix.values.col(j) + matrix.values.col(s));
    out.values.col(j) = mean;
    out.values.col(s) = mean;
  }
  return out;
}

RatingResult ReducedDeviationRating(
    const NormalFormGame& game,
    const std::vector<std::pair<int, int>>& symmetric_pairs,
    const SolverConfig& config) {
  CceConstraintMatrix matrix = BuildCceConstraintMatrix(game);
  for (const auto& [p, q] : symmetric_pairs) {
    matrix = SymmetrizeConstraints(game, matrix, p, q);
  }
  const ReducedConstraintSystem reduced = DedupJoints(matrix);
  const RowRating rows = RateConstraintRows(reduced.matrix, config);

  RatingResult result;
  result.ratings.resize(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    result.ratings[p].resize(game.num_strategies(p));
    for (int a = 0; a < game.num_strategies(p); ++a) {
      result.ratings[p][a] = rows.values[matrix.Row(p, a)];
    }
  }
  std::vector<double> sigma = reduced.Expand(rows.sigma.cwiseMax(0.0));
  const double total = std::accumulate(sigma.begin(), sigma.end(), 0.0);
  for (double& v : sigma) v /= total;
  result.equilibrium = JointDistribution::Create(std::move(sigma));
  for (const RowFreezeEvent& event : rows.freeze_log) {
    FreezeEvent out{event.iteration, {}, event.objective};
    for (int row : event.rows) out.frozen.push_back(matrix.rows[row]);
    result.freeze_log.push_back(std::move(out));
  }
  result.stage_count = rows.stage_count;
  return result;
}

std::string ToString(Property property) {
  switch (property) {
    case Property::kClone:
      return "clone";
    case Property::kMixture:
      return "mixture";
    case Property::kOffset:
      return "offset";
    case Property::kDominance:
      return "dominance";
    case Property::kBounds:
      return "bounds";
    case Property::kPermutation:
      return "permutation";
  }
  return "unknown";
}

Property ParseProperty(std::string_view name) {
  for (Property p : {Property::kClone, Property::kMixture, Property::kOffset,
                     Property::kDominance, Property::kBounds,
                     Property::kPermutation}) {
    if (ToString(p) == name) return p;
  }
  throw InputError("unknown property '" + std::string(name) + "'");
}

PropertyReport CheckProperty(const NormalFormGame& game, Property property,
                             const Rater& rater, uint64_t seed,
                             const PropertyOptions& options) {
  std::mt19937_64 rng(seed);
  const int p = std::uniform_int_distribution<int>(0, game.num_players() - 1)(rng);
  const int a =
      std::uniform_int_distribution<int>(0, game.num_strategies(p) - 1)(rng);
  const auto base = rater(game);
  PropertyReport report;
  report.property = property;
  std::ostringstream detail;
  detail << "player " << game.player_name(p);

  switch (property) {
    case Property::kClone: {
      report.transformed = CloneStrategy(game, p, a);
      auto expected = base;
      expected[p].push_back(base[p][a]);
      report.max_deviation = MaxAbsDifference(rater(*report.transformed), expected);
      detail << ", cloned " << game.strategy_labels(p)[a];
      break;
    }
    case Property::kMixture: {
      const auto weights = SampleDirichlet(game.num_strategies(p), 1.0, rng);
      report.transformed = MixStrategy(game, p, weights);
      auto expected = base;
      double mixed = 0.0;
      for (size_t i = 0; i < weights.size(); ++i) mixed += weights[i] * base[p][i];
      expected[p].push_back(mixed);
      report.max_deviation = MaxAbsDifference(rater(*report.transformed), expected);
      detail << ", appended a mixture";
      break;
    }
    case Property::kOffset: {
      OffsetSpec spec{p, std::vector<double>(game.num_opponent_joints(p), 0.0)};
      if (!options.zero_offset) {
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        for (double& v : spec.values) v = uniform(rng);
      }
      report.transformed = ApplyOffset(game, spec);
      report.max_deviation = MaxAbsDifference(rater(*report.transformed), base);
      detail << ", offset applied";
      break;
    }
    case Property::kDominance: {
      const NormalFormGame cloned = CloneStrategy(game, p, a);
      const int worse = cloned.num_strategies(p) - 1;
      std::uniform_real_distribution<double> penalty(0.01, 0.5);
      auto payoffs = cloned.all_payoffs();
      for (int64_t j = 0; j < cloned.num_joints(); ++j) {
        if (cloned.ActionOf(j, p) == worse) payoffs[p][j] -= penalty(rng);
      }
      report.transformed = NormalFormGame::Create(
          cloned.players(), cloned.strategies(), std::move(payoffs));
      const auto rated = rater(*report.transformed);
      report.max_deviation = std::max(0.0, rated[p][worse] - rated[p][a]);
      detail << ", dominated copy of " << game.strategy_labels(p)[a];
      break;
    }
    case Property::kBounds: {
      const CceConstraintMatrix matrix = BuildCceConstraintMatrix(game);
      for (int q = 0; q < game.num_players(); ++q) {
        for (int s = 0; s < game.num_strategies(q); ++s) {
          const double lower = matrix.values.row(matrix.Row(q, s)).minCoeff();
          report.max_deviation = std::max(
              {report.max_deviation, base[q][s], lower - base[q][s]});
        }
      }
      detail.str("all players");
      break;
    }
    case Property::kPermutation: {
      std::vector<int> perm(game.num_strategies(p));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      report.transformed = PermuteStrategies(game, p, perm);
      auto expected = base;
      for (size_t i = 0; i < perm.size(); ++i) expected[p][i] = base[p][perm[i]];
      report.max_deviation = MaxAbsDifference(rater(*report.transformed), expected);
      detail << ", permuted strategies";
      break;
    }
  }
  report.passed = report.max_deviation <= options.tolerance;
  report.detail = detail.str();
  return report;
}

}  // namespace devrating
