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

#ifndef DEVRATING_IMPROVEMENT_SIM_H_
#define DEVRATING_IMPROVEMENT_SIM_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "devrating/game.h"

namespace devrating {

// K mixed strategies per player over a full game's strategies.
struct Population {
  // members[p][k] is a distribution over full-game strategies of player p.
  std::vector<std::vector<std::vector<double>>> members;
  // ids[p][k]; ids grow with age order, so a smaller id is an older member.
  std::vector<std::vector<int>> ids;
  int generation = 0;

  int size() const { return members.empty() ? 0 : static_cast<int>(members[0].size()); }
};

// Assigns ids 0..K-1 per player and validates every member.
Population MakePopulation(const NormalFormGame& full,
                          std::vector<std::vector<std::vector<double>>> members);

// K Dirichlet(1, ..., 1) members per player.
Population RandomPopulation(const NormalFormGame& full, int size,
                            std::mt19937_64& rng);

// Game between population members: payoff at member tuple (k_1, ..., k_N)
// is the expected full-game payoff under the product of those mixtures.
NormalFormGame MetaGame(const NormalFormGame& full, const Population& pop);

// Full-game joint induced by a distribution over member tuples.
JointDistribution LiftToFull(const NormalFormGame& full,
                             const JointDistribution& sigma_meta,
                             const Population& pop);

enum class PopulationRater { kDeviation, kUniform };

std::string ToString(PopulationRater rater);
PopulationRater ParsePopulationRater(std::string_view name);

struct ImprovementConfig {
  int pop_size = 8;
  double cull_fraction = 0.25;
  int iters = 200;
  uint64_t seed = 0;
};

struct IterationRecord {
  // Full-game CCE gap of the lifted meta distribution: the deviation
  // rating's supporting equilibrium, or the uniform joint over members.
  double cce_gap = 0.0;
  // Expected payoff per player, uniformly over member tuples.
  std::vector<double> avg_payoff;
  // Ids culled per player at the end of this iteration.
  std::vector<std::vector<int>> culled;
};

struct Trajectory {
  std::vector<IterationRecord> records;
  PopulationRater rater = PopulationRater::kDeviation;
};

// Rate the members in the meta-game, record the full-game gap, cull the
// lowest-rated quarter of each player's members (oldest first on ties) and
// replace them with fresh Dirichlet draws. Deterministic given the seed.
Trajectory RunImprovementLoop(const NormalFormGame& full, PopulationRater rater,
                              const ImprovementConfig& config,
                              std::optional<Population> initial = std::nullopt);

}  // namespace devrating

#endif  // DEVRATING_IMPROVEMENT_SIM_H_
