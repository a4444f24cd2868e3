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

#include "devrating/improvement_sim.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "devrating/baselines.h"
#include "devrating/errors.h"
#include "devrating/game_library.h"
#include "devrating/rating.h"

namespace devrating {
namespace {

// Ratings closer than this are treated as tied when choosing whom to cull.
constexpr double kTieResolution = 1e-9;

// Probability of each full joint under the product of one member per player.
std::vector<double> ProductJoint(const NormalFormGame& full,
                                 const Population& pop,
                                 std::span<const int> tuple) {
  std::vector<double> probs(full.num_joints(), 1.0);
  for (int64_t j = 0; j < full.num_joints(); ++j) {
    for (int p = 0; p < full.num_players(); ++p) {
      probs[j] *= pop.members[p][tuple[p]][full.ActionOf(j, p)];
      if (probs[j] == 0.0) break;
    }
  }
  return probs;
}

}  // namespace

Population MakePopulation(const NormalFormGame& full,
                          std::vector<std::vector<std::vector<double>>> members) {
  if (static_cast<int>(members.size()) != full.num_players()) {
    throw InputError("population needs members for every player");
  }
  Population pop;
  for (int p = 0; p < full.num_players(); ++p) {
    if (members[p].size() != members[0].size() || members[p].empty()) {
      throw InputError("every player needs the same, non-zero member count");
    }
    std::vector<int> ids(members[p].size());
    std::iota(ids.begin(), ids.end(), 0);
    for (const auto& member : members[p]) {
      if (static_cast<int>(member.size()) != full.num_strategies(p)) {
        throw InputError("member of player " + full.player_name(p) +
                         " has the wrong dimension");
      }
      CheckDistribution(member, "population member");
    }
    pop.ids.push_back(std::move(ids));
  }
  pop.members = std::move(members);
  return pop;
}

Population RandomPopulation(const NormalFormGame& full, int size,
                            std::mt19937_64& rng) {
  std::vector<std::vector<std::vector<double>>> members(full.num_players());
  for (int p = 0; p < full.num_players(); ++p) {
    for (int k = 0; k < size; ++k) {
      members[p].push_back(SampleDirichlet(full.num_strategies(p), 1.0, rng));
    }
  }
  return MakePopulation(full, std::move(members));
}

NormalFormGame MetaGame(const NormalFormGame& full, const Population& pop) {
  if (static_cast<int>(pop.members.size()) != full.num_players()) {
    throw InputError("population does not match the full game's players");
  }
  Shape shape;
  std::vector<std::vector<std::string>> labels;
  for (int p = 0; p < full.num_players(); ++p) {
    shape.push_back(static_cast<int>(pop.members[p].size()));
    std::vector<std::string> names;
    for (int id : pop.ids[p]) names.push_back("m" + std::to_string(id));
    labels.push_back(std::move(names));
    for (const auto& member : pop.members[p]) {
      if (static_cast<int>(member.size()) != full.num_strategies(p)) {
        throw InputError("member dimension does not match the full game");
      }
    }
  }
  int64_t tuples = 1;
  for (int k : shape) tuples *= k;
  std::vector<std::vector<double>> payoffs(full.num_players(),
                                           std::vector<double>(tuples, 0.0));
  std::vector<int> tuple(full.num_players(), 0);
  for (int64_t t = 0; t < tuples; ++t) {
    int64_t rest = t;
    for (int p = full.num_players() - 1; p >= 0; --p) {
      tuple[p] = static_cast<int>(rest % shape[p]);
      rest /= shape[p];
    }
    const std::vector<double> probs = ProductJoint(full, pop, tuple);
    for (int p = 0; p < full.num_players(); ++p) {
      const auto g = full.payoffs(p);
      double value = 0.0;
      for (int64_t j = 0; j < full.num_joints(); ++j) value += probs[j] * g[j];
      payoffs[p][t] = value;
    }
  }
  return NormalFormGame::Create(full.players(), std::move(labels),
                                std::move(payoffs));
}

JointDistribution LiftToFull(const NormalFormGame& full,
                             const JointDistribution& sigma_meta,
                             const Population& pop) {
  int64_t tuples = 1;
  for (const auto& m : pop.members) tuples *= static_cast<int64_t>(m.size());
  if (sigma_meta.size() != tuples) {
    throw InputError("meta distribution does not match the population");
  }
  std::vector<double> out(full.num_joints(), 0.0);
  std::vector<int> tuple(full.num_players(), 0);
  for (int64_t t = 0; t < tuples; ++t) {
    if (sigma_meta[t] == 0.0) continue;
    int64_t rest = t;
    for (int p = full.num_players() - 1; p >= 0; --p) {
      const int k = static_cast<int>(pop.members[p].size());
      tuple[p] = static_cast<int>(rest % k);
      rest /= k;
    }
    const std::vector<double> probs = ProductJoint(full, pop, tuple);
    for (int64_t j = 0; j < full.num_joints(); ++j) {
      out[j] += sigma_meta[t] * probs[j];
    }
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= total;
  return JointDistribution::Create(std::move(out));
}

std::string ToString(PopulationRater rater) {
  return rater == PopulationRater::kDeviation ? "deviation" : "uniform";
}

PopulationRater ParsePopulationRater(std::string_view name) {
  if (name == "deviation") return PopulationRater::kDeviation;
  if (name == "uniform") return PopulationRater::kUniform;
  throw InputError("unknown population rater '" + std::string(name) + "'");
}

Trajectory RunImprovementLoop(const NormalFormGame& full, PopulationRater rater,
                              const ImprovementConfig& config,
                              std::optional<Population> initial) {
  const int cull = static_cast<int>(
      std::floor(config.pop_size * config.cull_fraction));
  if (cull < 1 || cull >= config.pop_size) {
    throw InputError("pop_size * cull_fraction must cull at least one member "
                     "and keep at least one");
  }
  if (config.iters < 0) throw InputError("iteration count must be non-negative");
  std::mt19937_64 rng(config.seed);
  Population pop = initial.has_value()
                       ? std::move(*initial)
                       : RandomPopulation(full, config.pop_size, rng);
  if (pop.size() != config.pop_size) {
    throw InputError("initial population size does not match pop_size");
  }
  std::vector<int> next_id(full.num_players());
  for (int p = 0; p < full.num_players(); ++p) {
    next_id[p] = *std::max_element(pop.ids[p].begin(), pop.ids[p].end()) + 1;
  }

  Trajectory trajectory;
  trajectory.rater = rater;
  for (int iter = 0; iter < config.iters; ++iter) {
    const NormalFormGame meta = MetaGame(full, pop);
    std::vector<std::vector<double>> ratings;
    JointDistribution sigma_meta;
    if (rater == PopulationRater::kDeviation) {
      try {
        RatingResult result = DeviationRating(meta);
        ratings = std::move(result.ratings);
        sigma_meta = std::move(result.equilibrium);
      } catch (const SolverError& e) {
        throw SolverError("iteration " + std::to_string(iter) + ": " + e.what());
      }
    } else {
      ratings = UniformRating(meta);
      sigma_meta = JointDistribution::Uniform(meta.num_joints());
    }

    IterationRecord record;
    record.cce_gap = CceGap(full, LiftToFull(full, sigma_meta, pop));
    for (int p = 0; p < full.num_players(); ++p) {
      const auto g = meta.payoffs(p);
      record.avg_payoff.push_back(std::accumulate(g.begin(), g.end(), 0.0) /
                                  static_cast<double>(g.size()));
    }
    record.culled.resize(full.num_players());
    for (int p = 0; p < full.num_players(); ++p) {
      std::vector<int> order(pop.size());
      std::iota(order.begin(), order.end(), 0);
      auto key = [&](int k) {
        return std::make_pair(std::llround(ratings[p][k] / kTieResolution),
                              pop.ids[p][k]);
      };
      std::sort(order.begin(), order.end(),
                [&](int x, int y) { return key(x) < key(y); });
      for (int c = 0; c < cull; ++c) {
        const int k = order[c];
        record.culled[p].push_back(pop.ids[p][k]);
        pop.members[p][k] = SampleDirichlet(full.num_strategies(p), 1.0, rng);
        pop.ids[p][k] = next_id[p]++;
      }
    }
    ++pop.generation;
    trajectory.records.push_back(std::move(record));
  }
  return trajectory;
}

}  // namespace devrating
