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

#include "devrating/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "devrating/errors.h"

namespace devrating {
namespace {

constexpr double kCceSlack = 1e-9;

// Builds a copy of `game` in which `player` gains one extra strategy whose
// slices are the `weights`-combination of the existing slices.
NormalFormGame ExtendPlayer(const NormalFormGame& game, int player,
                            std::span<const double> weights,
                            std::string label) {
  Shape shape = game.shape();
  const int old_count = shape[player];
  ++shape[player];
  int64_t joints = 1;
  for (int n : shape) joints *= n;
  const int64_t new_stride = game.stride(player);

  std::vector<std::vector<double>> payoffs(game.num_players(),
                                           std::vector<double>(joints));
  for (int64_t joint = 0; joint < joints; ++joint) {
    const int64_t high = joint / (new_stride * shape[player]);
    const int action = static_cast<int>((joint / new_stride) % shape[player]);
    const int64_t low = joint % new_stride;
    const int64_t base = high * new_stride * old_count + low;
    for (int q = 0; q < game.num_players(); ++q) {
      if (action < old_count) {
        payoffs[q][joint] = game.payoff(q, base + action * new_stride);
      } else {
        double value = 0.0;
        for (int i = 0; i < old_count; ++i) {
          if (weights[i] == 0.0) continue;
          value += weights[i] * game.payoff(q, base + i * new_stride);
        }
        payoffs[q][joint] = value;
      }
    }
  }
  auto strategies = game.strategies();
  strategies[player].push_back(std::move(label));
  return NormalFormGame::Create(game.players(), std::move(strategies),
                                std::move(payoffs));
}

std::string UniqueLabel(const std::vector<std::string>& labels,
                        const std::string& stem) {
  std::set<std::string> taken(labels.begin(), labels.end());
  for (int k = 1;; ++k) {
    std::string candidate = stem + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

void CheckSigma(const NormalFormGame& game, const JointDistribution& sigma) {
  if (sigma.size() != game.num_joints()) {
    std::ostringstream msg;
    msg << "joint distribution has " << sigma.size()
        << " entries but the game has " << game.num_joints() << " joints";
    throw InputError(msg.str());
  }
}

}  // namespace

double Quantize(double value, int decimals) {
  if (!std::isfinite(value) || decimals < 0 || decimals > 22) return value;
  const double scale = std::pow(10.0, decimals);
  const double hi = value * scale;
  if (std::fabs(hi) >= 0x1p52) return value;
  // hi + lo is the exact product.
  const double lo = std::fma(value, scale, -hi);
  double k = std::nearbyint(hi);
  const double frac = (hi - k) + lo;
  if (frac > 0.5) {
    k += 1.0;
  } else if (frac < -0.5) {
    k -= 1.0;
  } else if (frac == 0.5 || frac == -0.5) {
    const double other = frac > 0 ? k + 1.0 : k - 1.0;
    if (std::fmod(other, 2.0) == 0.0) k = other;
  }
  return k / scale;
}

NormalFormGame NormalFormGame::Create(
    std::vector<std::string> players,
    std::vector<std::vector<std::string>> strategies,
    std::vector<std::vector<double>> payoffs) {
  const int n = static_cast<int>(strategies.size());
  if (n == 0) throw InputError("a game needs at least one player");
  if (players.empty()) {
    for (int p = 0; p < n; ++p) players.push_back("p" + std::to_string(p + 1));
  }
  if (static_cast<int>(players.size()) != n) {
    throw InputError("shape mismatch: " + std::to_string(players.size()) +
                     " player names for " + std::to_string(n) +
                     " strategy lists");
  }
  if (static_cast<int>(payoffs.size()) != n) {
    throw InputError("shape mismatch: " + std::to_string(payoffs.size()) +
                     " payoff tensors for " + std::to_string(n) + " players");
  }
  std::set<std::string> names;
  for (const auto& name : players) {
    if (!names.insert(name).second) {
      throw InputError("duplicate player name '" + name + "'");
    }
  }

  NormalFormGame game;
  game.shape_.resize(n);
  int64_t joints = 1;
  for (int p = 0; p < n; ++p) {
    if (strategies[p].empty()) {
      throw InputError("shape mismatch: player " + players[p] +
                       " has no strategies");
    }
    std::set<std::string> seen;
    for (size_t i = 0; i < strategies[p].size(); ++i) {
      if (!seen.insert(strategies[p][i]).second) {
        throw InputError("duplicate label '" + strategies[p][i] +
                         "' for player " + players[p] + " at index " +
                         std::to_string(i));
      }
    }
    game.shape_[p] = static_cast<int>(strategies[p].size());
    joints *= game.shape_[p];
  }
  for (int p = 0; p < n; ++p) {
    if (static_cast<int64_t>(payoffs[p].size()) != joints) {
      throw InputError("shape mismatch: payoff tensor of player " +
                       players[p] + " has " +
                       std::to_string(payoffs[p].size()) +
                       " entries, expected " + std::to_string(joints));
    }
    for (size_t i = 0; i < payoffs[p].size(); ++i) {
      if (!std::isfinite(payoffs[p][i])) {
        throw InputError("non-finite entry in payoff tensor of player " +
                         players[p] + " at flat index " + std::to_string(i));
      }
      payoffs[p][i] = Quantize(payoffs[p][i]);
    }
  }
  game.strides_.assign(n, 1);
  for (int p = n - 2; p >= 0; --p) {
    game.strides_[p] = game.strides_[p + 1] * game.shape_[p + 1];
  }
  game.num_joints_ = joints;
  game.players_ = std::move(players);
  game.strategies_ = std::move(strategies);
  game.payoffs_ = std::move(payoffs);
  return game;
}

int NormalFormGame::total_strategies() const {
  return std::accumulate(shape_.begin(), shape_.end(), 0);
}

int64_t NormalFormGame::JointIndex(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_players()) {
    throw InputError("joint strategy has wrong number of players");
  }
  int64_t index = 0;
  for (int p = 0; p < num_players(); ++p) {
    CheckStrategy(p, actions[p]);
    index += actions[p] * strides_[p];
  }
  return index;
}

std::vector<int> NormalFormGame::JointActions(int64_t joint) const {
  std::vector<int> actions(num_players());
  for (int p = 0; p < num_players(); ++p) actions[p] = ActionOf(joint, p);
  return actions;
}

int NormalFormGame::PlayerIndex(std::string_view name) const {
  for (int p = 0; p < num_players(); ++p) {
    if (players_[p] == name) return p;
  }
  throw InputError("unknown player '" + std::string(name) + "'");
}

int NormalFormGame::StrategyIndex(int player, std::string_view label) const {
  CheckPlayer(player);
  const auto& labels = strategies_[player];
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw InputError("unknown strategy '" + std::string(label) +
                   "' for player " + players_[player]);
}

void NormalFormGame::CheckPlayer(int player) const {
  if (player < 0 || player >= num_players()) {
    throw InputError("unknown player index " + std::to_string(player));
  }
}

void NormalFormGame::CheckStrategy(int player, int strategy) const {
  CheckPlayer(player);
  if (strategy < 0 || strategy >= shape_[player]) {
    throw InputError("unknown strategy index " + std::to_string(strategy) +
                     " for player " + players_[player]);
  }
}

NormalFormGame BuildGame(std::vector<std::vector<std::string>> strategies,
                         std::vector<std::vector<double>> payoffs) {
  return NormalFormGame::Create({}, std::move(strategies), std::move(payoffs));
}

void CheckDistribution(std::span<const double> weights, std::string_view what) {
  if (weights.empty()) {
    throw InputError(std::string(what) + " is empty");
  }
  double sum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < -kNegativeMassTolerance) {
      throw InputError(std::string(what) + " has invalid entry " +
                       std::to_string(weights[i]) + " at index " +
                       std::to_string(i));
    }
    sum += weights[i];
  }
  if (std::fabs(sum - 1.0) > kDistributionSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " sums to " << sum << ", not 1";
    throw InputError(msg.str());
  }
}

JointDistribution JointDistribution::Create(std::vector<double> probs) {
  CheckDistribution(probs, "joint distribution");
  for (double& p : probs) p = std::max(p, 0.0);
  return JointDistribution(std::move(probs));
}

JointDistribution JointDistribution::Uniform(int64_t size) {
  if (size <= 0) throw InputError("joint distribution is empty");
  return JointDistribution(std::vector<double>(size, 1.0 / size));
}

JointDistribution JointDistribution::PointMass(int64_t size, int64_t index) {
  if (index < 0 || index >= size) {
    throw InputError("point mass index out of range");
  }
  std::vector<double> probs(size, 0.0);
  probs[index] = 1.0;
  return JointDistribution(std::move(probs));
}

double PairwiseDeviationGain(const NormalFormGame& game,
                             const JointDistribution& sigma, int player,
                             int deviation, int recommended) {
  game.CheckStrategy(player, deviation);
  game.CheckStrategy(player, recommended);
  CheckSigma(game, sigma);
  const auto payoffs = game.payoffs(player);
  double gain = 0.0;
  for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
    if (game.ActionOf(joint, player) != recommended || sigma[joint] == 0.0) {
      continue;
    }
    const int64_t deviated = game.WithAction(joint, player, deviation);
    gain += sigma[joint] * (payoffs[deviated] - payoffs[joint]);
  }
  return gain;
}

double CceDeviationGain(const NormalFormGame& game,
                        const JointDistribution& sigma, int player,
                        int deviation) {
  game.CheckStrategy(player, deviation);
  CheckSigma(game, sigma);
  const auto payoffs = game.payoffs(player);
  double gain = 0.0;
  for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
    if (sigma[joint] == 0.0) continue;
    const int64_t deviated = game.WithAction(joint, player, deviation);
    gain += sigma[joint] * (payoffs[deviated] - payoffs[joint]);
  }
  return gain;
}

std::vector<std::vector<double>> CceDeviationGains(
    const NormalFormGame& game, const JointDistribution& sigma) {
  CheckSigma(game, sigma);
  std::vector<std::vector<double>> gains(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const auto payoffs = game.payoffs(p);
    gains[p].assign(game.num_strategies(p), 0.0);
    for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
      const double mass = sigma[joint];
      if (mass == 0.0) continue;
      for (int a = 0; a < game.num_strategies(p); ++a) {
        const int64_t deviated = game.WithAction(joint, p, a);
        gains[p][a] += mass * (payoffs[deviated] - payoffs[joint]);
      }
    }
  }
  return gains;
}

double CceGap(const NormalFormGame& game, const JointDistribution& sigma) {
  double gap = 0.0;
  for (const auto& player_gains : CceDeviationGains(game, sigma)) {
    const double worst =
        *std::max_element(player_gains.begin(), player_gains.end());
    gap += std::max(0.0, worst);
  }
  return gap;
}

CceCheck VerifyCce(const NormalFormGame& game, const JointDistribution& sigma,
                   double epsilon) {
  const auto gains = CceDeviationGains(game, sigma);
  CceCheck check;
  check.worst_gain = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < game.num_players(); ++p) {
    for (int a = 0; a < game.num_strategies(p); ++a) {
      if (gains[p][a] > check.worst_gain) {
        check.worst_gain = gains[p][a];
        check.worst = {p, a};
      }
    }
  }
  check.is_equilibrium = check.worst_gain <= epsilon + kCceSlack;
  return check;
}

CceConstraintMatrix BuildCceConstraintMatrix(const NormalFormGame& game) {
  CceConstraintMatrix matrix;
  const int rows = game.total_strategies();
  matrix.values.resize(rows, game.num_joints());
  matrix.player_offset.resize(game.num_players());
  int row = 0;
  for (int p = 0; p < game.num_players(); ++p) {
    matrix.player_offset[p] = row;
    const auto payoffs = game.payoffs(p);
    for (int a = 0; a < game.num_strategies(p); ++a, ++row) {
      matrix.rows.push_back({p, a});
      for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
        matrix.values(row, joint) =
            payoffs[game.WithAction(joint, p, a)] - payoffs[joint];
      }
    }
  }
  return matrix;
}

NormalFormGame CloneStrategy(const NormalFormGame& game, int player,
                             int strategy) {
  game.CheckStrategy(player, strategy);
  std::vector<double> weights(game.num_strategies(player), 0.0);
  weights[strategy] = 1.0;
  const auto& labels = game.strategy_labels(player);
  return ExtendPlayer(game, player, weights,
                      UniqueLabel(labels, labels[strategy] + "#clone-"));
}

NormalFormGame RemoveStrategy(const NormalFormGame& game, int player,
                              int strategy) {
  game.CheckStrategy(player, strategy);
  if (game.num_strategies(player) < 2) {
    throw InputError("cannot remove the only strategy of player " +
                     game.player_name(player));
  }
  std::vector<int> keep;
  for (int a = 0; a < game.num_strategies(player); ++a) {
    if (a != strategy) keep.push_back(a);
  }
  Shape shape = game.shape();
  --shape[player];
  int64_t joints = 1;
  for (int n : shape) joints *= n;
  const int64_t stride = game.stride(player);
  std::vector<std::vector<double>> payoffs(game.num_players(),
                                           std::vector<double>(joints));
  for (int64_t joint = 0; joint < joints; ++joint) {
    const int64_t high = joint / (stride * shape[player]);
    const int action = static_cast<int>((joint / stride) % shape[player]);
    const int64_t low = joint % stride;
    const int64_t old_joint =
        (high * game.num_strategies(player) + keep[action]) * stride + low;
    for (int q = 0; q < game.num_players(); ++q) {
      payoffs[q][joint] = game.payoff(q, old_joint);
    }
  }
  auto strategies = game.strategies();
  strategies[player].erase(strategies[player].begin() + strategy);
  return NormalFormGame::Create(game.players(), std::move(strategies),
                                std::move(payoffs));
}

NormalFormGame MixStrategy(const NormalFormGame& game, int player,
                           std::span<const double> weights, std::string label) {
  game.CheckPlayer(player);
  if (static_cast<int>(weights.size()) != game.num_strategies(player)) {
    throw InputError("mixture weights have " + std::to_string(weights.size()) +
                     " entries but player " + game.player_name(player) +
                     " has " + std::to_string(game.num_strategies(player)) +
                     " strategies");
  }
  CheckDistribution(weights, "mixture weights");
  std::vector<double> clamped(weights.begin(), weights.end());
  for (double& w : clamped) w = std::max(w, 0.0);
  if (label.empty()) label = UniqueLabel(game.strategy_labels(player), "mix#");
  return ExtendPlayer(game, player, clamped, std::move(label));
}

NormalFormGame PermuteStrategies(const NormalFormGame& game, int player,
                                 std::span<const int> perm) {
  game.CheckPlayer(player);
  const int count = game.num_strategies(player);
  std::vector<int> sorted(perm.begin(), perm.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> identity(count);
  std::iota(identity.begin(), identity.end(), 0);
  if (sorted != identity) {
    throw InputError("strategy permutation is not a permutation of 0.." +
                     std::to_string(count - 1));
  }
  std::vector<std::vector<double>> payoffs(
      game.num_players(), std::vector<double>(game.num_joints()));
  for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
    const int64_t source =
        game.WithAction(joint, player, perm[game.ActionOf(joint, player)]);
    for (int q = 0; q < game.num_players(); ++q) {
      payoffs[q][joint] = game.payoff(q, source);
    }
  }
  auto strategies = game.strategies();
  for (int i = 0; i < count; ++i) {
    strategies[player][i] = game.strategy_labels(player)[perm[i]];
  }
  return NormalFormGame::Create(game.players(), std::move(strategies),
                                std::move(payoffs));
}

NormalFormGame ApplyOffset(const NormalFormGame& game, const OffsetSpec& spec) {
  game.CheckPlayer(spec.player);
  const int p = spec.player;
  if (static_cast<int64_t>(spec.values.size()) != game.num_opponent_joints(p)) {
    throw InputError("offset for player " + game.player_name(p) + " has " +
                     std::to_string(spec.values.size()) +
                     " entries, expected " +
                     std::to_string(game.num_opponent_joints(p)));
  }
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw InputError("non-finite offset entry");
  }
  auto payoffs = game.all_payoffs();
  const int64_t stride = game.stride(p);
  for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
    const int64_t high = joint / (stride * game.num_strategies(p));
    const int64_t opponents = high * stride + joint % stride;
    payoffs[p][joint] += spec.values[opponents];
  }
  return NormalFormGame::Create(game.players(), game.strategies(),
                                std::move(payoffs));
}

std::vector<double> Marginal(const NormalFormGame& game,
                             const JointDistribution& sigma, int player) {
  game.CheckPlayer(player);
  CheckSigma(game, sigma);
  std::vector<double> marginal(game.num_strategies(player), 0.0);
  for (int64_t joint = 0; joint < game.num_joints(); ++joint) {
    marginal[game.ActionOf(joint, player)] += sigma[joint];
  }
  return marginal;
}

}  // namespace devrating
