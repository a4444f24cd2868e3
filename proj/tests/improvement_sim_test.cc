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

#include <random>

#include "devrating/baselines.h"
#include "devrating/errors.h"
#include "devrating/game_library.h"
#include "devrating/rating.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace devrating {
namespace {

Population Basis(const NormalFormGame& full) {
  std::vector<std::vector<std::vector<double>>> members(full.num_players());
  for (int p = 0; p < full.num_players(); ++p) {
    for (int a = 0; a < full.num_strategies(p); ++a) {
      std::vector<double> e(full.num_strategies(p), 0.0);
      e[a] = 1.0;
      members[p].push_back(e);
    }
  }
  return MakePopulation(full, members);
}

TEST(MetaGameTest, BasisRecoversFullGame) {
  std::mt19937_64 rng(1);
  const NormalFormGame full = RandomGame({3, 3}, rng);
  EXPECT_EQ(MetaGame(full, Basis(full)).all_payoffs(), full.all_payoffs());
}

TEST(MetaGameTest, IdenticalMembersAreClones) {
  const NormalFormGame full = BiasedShapley();
  const std::vector<double> x = {0.2, 0.3, 0.5};
  const Population pop = MakePopulation(full, {{x, x}, {{1, 0, 0}, x}});
  const NormalFormGame meta = MetaGame(full, pop);
  for (int b = 0; b < 2; ++b) EXPECT_EQ(meta.payoff(0, b), meta.payoff(0, 2 + b));
}

TEST(MetaGameTest, BilinearPayoffs) {
  const NormalFormGame full = BuildGame({{"a", "b"}, {"c", "d"}},
                                        {{1, -2, 3, 0.5}, {0, 4, -1, 2}});
  const std::vector<double> uniform = {0.5, 0.5};
  const std::vector<double> pure = {1, 0};
  const Population pop = MakePopulation(full, {{uniform, pure}, {uniform, pure}});
  const NormalFormGame meta = MetaGame(full, pop);
  // (uniform, uniform), (uniform, pure), (pure, uniform), (pure, pure).
  EXPECT_NEAR(meta.payoff(0, 0), (1 - 2 + 3 + 0.5) / 4, 1e-12);
  EXPECT_NEAR(meta.payoff(0, 1), (1 + 3) / 2.0, 1e-12);
  EXPECT_NEAR(meta.payoff(0, 2), (1 - 2) / 2.0, 1e-12);
  EXPECT_NEAR(meta.payoff(0, 3), 1, 1e-12);
  EXPECT_NEAR(meta.payoff(1, 0), (0 + 4 - 1 + 2) / 4.0, 1e-12);
  EXPECT_NEAR(meta.payoff(1, 3), 0, 1e-12);
}

TEST(MetaGameTest, RejectsDimensionMismatch) {
  const NormalFormGame full = BiasedShapley();
  EXPECT_THROW(MakePopulation(full, {{{1, 0}}, {{1, 0, 0}}}), InputError);
}

TEST(LiftToFullTest, Examples) {
  const NormalFormGame full = BiasedShapley();
  const Population basis = Basis(full);
  const auto point = LiftToFull(full, JointDistribution::PointMass(9, 5), basis);
  EXPECT_EQ(point[5], 1.0);

  const std::vector<double> u = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const Population flat = MakePopulation(full, {{u, u}, {u, u}});
  const auto lifted = LiftToFull(full, JointDistribution::Create({0.1, 0.2, 0.3, 0.4}), flat);
  for (int64_t j = 0; j < 9; ++j) EXPECT_NEAR(lifted[j], 1.0 / 9, 1e-12);
}

TEST(LiftToFullTest, MatchesTupleExpansion) {
  std::mt19937_64 rng(3);
  const NormalFormGame full = RandomGame({2, 3, 2}, rng);
  const Population pop = RandomPopulation(full, 2, rng);
  const auto sigma = JointDistribution::Create(SampleDirichlet(8, 1.0, rng));
  const auto lifted = LiftToFull(full, sigma, pop);
  for (int64_t j = 0; j < full.num_joints(); ++j) {
    const auto a = full.JointActions(j);
    double expected = 0.0;
    for (int k0 = 0; k0 < 2; ++k0) {
      for (int k1 = 0; k1 < 2; ++k1) {
        for (int k2 = 0; k2 < 2; ++k2) {
          expected += sigma[(k0 * 2 + k1) * 2 + k2] * pop.members[0][k0][a[0]] *
                      pop.members[1][k1][a[1]] * pop.members[2][k2][a[2]];
        }
      }
    }
    EXPECT_NEAR(lifted[j], expected, 1e-12);
  }
}

TEST(ImprovementLoopTest, DeterministicPerSeed) {
  std::mt19937_64 rng(5);
  const NormalFormGame full = RandomGame({3, 3}, rng);
  ImprovementConfig config;
  config.iters = 20;
  config.seed = 42;
  const Trajectory a = RunImprovementLoop(full, PopulationRater::kDeviation, config);
  const Trajectory b = RunImprovementLoop(full, PopulationRater::kDeviation, config);
  ASSERT_EQ(a.records.size(), 20u);
  for (size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].cce_gap, b.records[i].cce_gap);
    EXPECT_EQ(a.records[i].avg_payoff, b.records[i].avg_payoff);
    EXPECT_EQ(a.records[i].culled, b.records[i].culled);
    EXPECT_GE(a.records[i].cce_gap, 0.0);
    for (const auto& culled : a.records[i].culled) EXPECT_EQ(culled.size(), 2u);
  }
}

TEST(ImprovementLoopTest, NashPopulationHasZeroGap) {
  const NormalFormGame full = BiasedShapley();
  const auto nash = BiasedShapleyNash();
  std::vector<std::vector<std::vector<double>>> members(
      2, std::vector<std::vector<double>>(8, nash));
  ImprovementConfig config;
  config.iters = 1;
  const Trajectory t = RunImprovementLoop(full, PopulationRater::kDeviation,
                                          config, MakePopulation(full, members));
  EXPECT_NEAR(t.records[0].cce_gap, 0.0, 1e-6);
  // All members tie, so the oldest two are culled.
  EXPECT_THAT(t.records[0].culled[0], ::testing::ElementsAre(0, 1));
}

TEST(ImprovementLoopTest, CullsMinimalRatings) {
  std::mt19937_64 rng(7);
  const NormalFormGame full = RandomGame({3, 3}, rng);
  ImprovementConfig config;
  config.iters = 1;
  Population pop = RandomPopulation(full, 8, rng);
  const auto ratings = DeviationRating(MetaGame(full, pop)).ratings;
  const Trajectory t =
      RunImprovementLoop(full, PopulationRater::kDeviation, config, pop);
  for (int p = 0; p < 2; ++p) {
    double culled_max = -INFINITY;
    for (int id : t.records[0].culled[p]) culled_max = std::max(culled_max, ratings[p][id]);
    int below = 0;
    for (double r : ratings[p]) below += r < culled_max - 1e-9;
    EXPECT_LT(below, 2);
  }
}

TEST(ImprovementLoopTest, RejectsTinyPopulations) {
  ImprovementConfig config;
  config.pop_size = 3;
  EXPECT_THROW(RunImprovementLoop(BiasedShapley(), PopulationRater::kUniform, config),
               InputError);
}

TEST(ImprovementLoopTest, UniformRaterUsesUniformJoint) {
  const NormalFormGame full = BiasedShapley();
  ImprovementConfig config;
  config.iters = 3;
  config.seed = 9;
  const Trajectory t = RunImprovementLoop(full, PopulationRater::kUniform, config);
  for (const auto& record : t.records) EXPECT_GE(record.cce_gap, 0.0);
  EXPECT_EQ(ParsePopulationRater("uniform"), PopulationRater::kUniform);
}

}  // namespace
}  // namespace devrating
