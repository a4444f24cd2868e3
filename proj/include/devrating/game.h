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

#ifndef DEVRATING_GAME_H_
#define DEVRATING_GAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Core"

namespace devrating {

inline constexpr double kDistributionSumTolerance = 1e-9;
inline constexpr double kNegativeMassTolerance = 1e-12;
inline constexpr int kPayoffDecimals = 14;

// Rounds half-to-even at `decimals` places after the point. Values too large
// to carry that many fractional digits in a double are returned unchanged.
double Quantize(double value, int decimals = kPayoffDecimals);

// Per-player strategy counts; joints are flattened row-major with player 0
// as the slowest-varying axis.
using Shape = std::vector<int>;

// An N-player normal-form game with one dense payoff tensor per player.
// Immutable once built; payoffs are quantized to 14 decimal places.
class NormalFormGame {
 public:
  // Validates shapes, finiteness and label uniqueness. Player names default
  // to "p1".."pN" when `players` is empty.
  static NormalFormGame Create(std::vector<std::string> players,
                               std::vector<std::vector<std::string>> strategies,
                               std::vector<std::vector<double>> payoffs);

  int num_players() const { return static_cast<int>(shape_.size()); }
  int num_strategies(int player) const { return shape_[player]; }
  const Shape& shape() const { return shape_; }
  int64_t num_joints() const { return num_joints_; }
  int total_strategies() const;
  // Number of joint strategies of everyone except `player`.
  int64_t num_opponent_joints(int player) const {
    return num_joints_ / shape_[player];
  }
  int64_t stride(int player) const { return strides_[player]; }

  const std::vector<std::string>& players() const { return players_; }
  const std::string& player_name(int player) const { return players_[player]; }
  const std::vector<std::vector<std::string>>& strategies() const {
    return strategies_;
  }
  const std::vector<std::string>& strategy_labels(int player) const {
    return strategies_[player];
  }

  std::span<const double> payoffs(int player) const { return payoffs_[player]; }
  const std::vector<std::vector<double>>& all_payoffs() const {
    return payoffs_;
  }
  double payoff(int player, int64_t joint) const {
    return payoffs_[player][joint];
  }

  // Strategy of `player` inside flattened joint `joint`.
  int ActionOf(int64_t joint, int player) const {
    return static_cast<int>((joint / strides_[player]) % shape_[player]);
  }
  // Same joint with `player`'s strategy replaced by `action`.
  int64_t WithAction(int64_t joint, int player, int action) const {
    return joint + (action - ActionOf(joint, player)) * strides_[player];
  }
  int64_t JointIndex(std::span<const int> actions) const;
  std::vector<int> JointActions(int64_t joint) const;

  // Lookups by label; throw InputError naming the missing label.
  int PlayerIndex(std::string_view name) const;
  int StrategyIndex(int player, std::string_view label) const;

  void CheckPlayer(int player) const;
  void CheckStrategy(int player, int strategy) const;

 private:
  NormalFormGame() = default;

  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> strategies_;
  std::vector<std::vector<double>> payoffs_;
  Shape shape_;
  std::vector<int64_t> strides_;
  int64_t num_joints_ = 0;
};

// Convenience constructor with default player names.
NormalFormGame BuildGame(std::vector<std::vector<std::string>> strategies,
                         std::vector<std::vector<double>> payoffs);

// A probability vector over the flattened joint strategies of a game.
class JointDistribution {
 public:
  JointDistribution() = default;

  // Entries below -1e-12 or a sum off by more than 1e-9 are errors; small
  // negative entries are clamped to zero.
  static JointDistribution Create(std::vector<double> probs);
  static JointDistribution Uniform(int64_t size);
  static JointDistribution PointMass(int64_t size, int64_t index);

  int64_t size() const { return static_cast<int64_t>(probs_.size()); }
  double operator[](int64_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  explicit JointDistribution(std::vector<double> probs)
      : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Validates `weights` as a distribution (same tolerances as joints).
void CheckDistribution(std::span<const double> weights, std::string_view what);

// A unilateral deviation target: player `player` switching to `strategy`.
struct Deviation {
  int player = 0;
  int strategy = 0;
  friend bool operator==(const Deviation&, const Deviation&) = default;
  friend auto operator<=>(const Deviation&, const Deviation&) = default;
};

// Expected gain for `player` from playing `deviation` whenever `recommended`
// is recommended by `sigma`.
double PairwiseDeviationGain(const NormalFormGame& game,
                             const JointDistribution& sigma, int player,
                             int deviation, int recommended);

// Expected gain for `player` from ignoring `sigma` and always playing
// `deviation`.
double CceDeviationGain(const NormalFormGame& game,
                        const JointDistribution& sigma, int player,
                        int deviation);

// All CCE deviation gains, indexed [player][strategy].
std::vector<std::vector<double>> CceDeviationGains(
    const NormalFormGame& game, const JointDistribution& sigma);

// Sum over players of the largest deviation gain, each clipped at zero.
double CceGap(const NormalFormGame& game, const JointDistribution& sigma);

struct CceCheck {
  bool is_equilibrium = false;
  // Largest gain over all deviations and the deviation attaining it. When
  // the game has no deviations `worst_gain` is 0.
  double worst_gain = 0.0;
  Deviation worst;
};

// True iff every deviation gain is at most epsilon + 1e-9.
CceCheck VerifyCce(const NormalFormGame& game, const JointDistribution& sigma,
                   double epsilon);

// Rows are deviations (p, a'), ordered by player then strategy; columns are
// flattened joints. Entry ((p, a'), a) = G_p(a', a_-p) - G_p(a), so that
// values * sigma lists every CCE deviation gain.
struct CceConstraintMatrix {
  Eigen::MatrixXd values;
  std::vector<Deviation> rows;
  std::vector<int> player_offset;

  int Row(int player, int strategy) const {
    return player_offset[player] + strategy;
  }
};

CceConstraintMatrix BuildCceConstraintMatrix(const NormalFormGame& game);

// Game transformations used to exercise rating desiderata.

// Appends a copy of `strategy` for `player`, labelled "<label>#clone-k".
NormalFormGame CloneStrategy(const NormalFormGame& game, int player,
                             int strategy);

// Deletes one strategy of `player`; the player must keep at least one.
NormalFormGame RemoveStrategy(const NormalFormGame& game, int player,
                              int strategy);

// Appends a strategy whose payoff slices (for every player) are the
// `weights`-average of `player`'s existing slices. Labelled "mix#k" unless a
// label is supplied.
NormalFormGame MixStrategy(const NormalFormGame& game, int player,
                           std::span<const double> weights,
                           std::string label = "");

// Reorders `player`'s strategies: new strategy i is old strategy perm[i].
NormalFormGame PermuteStrategies(const NormalFormGame& game, int player,
                                 std::span<const int> perm);

// b_p(a_-p): added to `player`'s payoff for every own strategy. `values` is
// laid out row-major over the other players in their original order.
struct OffsetSpec {
  int player = 0;
  std::vector<double> values;
};

NormalFormGame ApplyOffset(const NormalFormGame& game, const OffsetSpec& spec);

// Probability that `player` is recommended each of their strategies.
std::vector<double> Marginal(const NormalFormGame& game,
                             const JointDistribution& sigma, int player);

}  // namespace devrating

#endif  // DEVRATING_GAME_H_
