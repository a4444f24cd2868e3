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
#include <numeric>
#include <optional>
#include <random>

#include "devrating/errors.h"
#include "devrating/game_library.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace devrating {
namespace {

using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;

constexpr double kRatingTol = 1e-6;

void ExpectValidResult(const NormalFormGame& game, const RatingResult& result) {
  const RatingCertificate cert = CertifyRating(game, result);
  EXPECT_LE(cert.max_gain_error, kRatingTol);
  EXPECT_LE(cert.cce_violation, 1e-7);
  EXPECT_TRUE(cert.stage_count_within_bound);
  EXPECT_TRUE(cert.stage_objectives_monotone);
  EXPECT_TRUE(cert.ratings_within_bounds);
  EXPECT_TRUE(VerifyCce(game, result.equilibrium, 1e-7).is_equilibrium);
}

void ExpectRatingsNear(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (size_t p = 0; p < a.size(); ++p) {
    ASSERT_EQ(a[p].size(), b[p].size());
    for (size_t i = 0; i < a[p].size(); ++i) {
      EXPECT_NEAR(a[p][i], b[p][i], tol) << "player " << p << " strategy " << i;
    }
  }
}

TEST(DeviationRatingTest, BiasedShapleyWithNash) {
  const NormalFormGame game = BiasedShapleyWithNash();
  const RatingResult result = DeviationRating(game);
  for (int p = 0; p < 2; ++p) {
    for (int a = 0; a < 4; ++a) {
      EXPECT_NEAR(result.ratings[p][a], -2720.0 / 964, kRatingTol);
    }
  }
  ExpectValidResult(game, result);
}

TEST(DeviationRatingTest, SingleStrategyGame) {
  const NormalFormGame game = BuildGame({{"x"}, {"y"}, {"z"}}, {{1}, {2}, {3}});
  const RatingResult result = DeviationRating(game);
  EXPECT_THAT(result.ratings,
              ElementsAre(ElementsAre(0.0), ElementsAre(0.0), ElementsAre(0.0)));
  EXPECT_EQ(result.equilibrium[0], 1.0);
  const RatingCertificate cert = CertifyRating(game, result);
  EXPECT_EQ(cert.num_deviations, 0);
  EXPECT_EQ(cert.cce_violation, 0.0);
}

TEST(DeviationRatingTest, PrisonersDilemma) {
  const NormalFormGame game = PrisonersDilemma();
  const RatingResult result = DeviationRating(game);
  for (int p = 0; p < 2; ++p) {
    EXPECT_NEAR(result.ratings[p][1], 0.0, kRatingTol);
    EXPECT_NEAR(result.ratings[p][0], -1.0, kRatingTol);
  }
  EXPECT_NEAR(result.equilibrium[3], 1.0, 1e-9);
  ASSERT_FALSE(result.freeze_log.empty());
  EXPECT_THAT(result.freeze_log.front().frozen,
              UnorderedElementsAre(Deviation{0, 1}, Deviation{1, 1}));
  ExpectValidResult(game, result);
}

TEST(DeviationRatingTest, RejectsBadConfig) {
  SolverConfig config;
  config.active_tol = 0;
  EXPECT_THROW(DeviationRating(MatchingPennies(), config), InputError);
}

TEST(DeviationRatingTest, StageBudgetExceeded) {
  SolverConfig config;
  config.max_stages = 1;
  // The PD needs two stages: the D rows, then the C rows.
  EXPECT_THROW(DeviationRating(PrisonersDilemma(), config), SolverError);
}

TEST(SolveStageTest, Examples) {
  const auto mp = BuildCceConstraintMatrix(MatchingPennies());
  std::vector<std::optional<double>> none(4);
  EXPECT_NEAR(SolveStage(mp, none).objective, 0.0, 1e-9);

  const auto pd = BuildCceConstraintMatrix(PrisonersDilemma());
  const StageSolution stage = SolveStage(pd, none);
  EXPECT_NEAR(stage.objective, 0.0, 1e-9);
  EXPECT_NEAR(stage.row_gains(pd.Row(0, 1)), 0.0, 1e-9);
  EXPECT_NEAR(stage.row_gains(pd.Row(1, 1)), 0.0, 1e-9);
}

TEST(SolveStageTest, FullyPinnedSystem) {
  std::mt19937_64 rng(43);
  const NormalFormGame game = RandomGame({3, 3}, rng);
  const auto matrix = BuildCceConstraintMatrix(game);
  const RatingResult result = DeviationRating(game);
  std::vector<std::optional<double>> frozen;
  for (const Deviation& d : matrix.rows) {
    frozen.push_back(result.ratings[d.player][d.strategy]);
  }
  const int open = matrix.Row(1, 2);
  frozen[open].reset();
  const StageSolution stage = SolveStage(matrix, frozen);
  EXPECT_NEAR(stage.objective, result.ratings[1][2], kRatingTol);
}

TEST(SolveStageTest, InfeasiblePinsAreReported) {
  const auto pd = BuildCceConstraintMatrix(PrisonersDilemma());
  std::vector<std::optional<double>> frozen(4);
  frozen[pd.Row(0, 1)] = 0.0;
  frozen[pd.Row(0, 0)] = 0.0;  // Cannot hold together with (p1, D) = 0.
  try {
    SolveStage(pd, frozen);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_THAT(e.what(), ::testing::HasSubstr("infeasible"));
  }
}

TEST(DetectActiveTest, Examples) {
  const SolverConfig config;
  std::vector<std::optional<double>> none(4);
  const std::vector<double> exact = {0, 0, -1, -1};
  EXPECT_THAT(DetectActive(exact, 0, std::nullopt, none, config),
              ElementsAre(0, 1));
  const std::vector<double> banded = {0, -1e-12, -1, -1};
  EXPECT_THAT(DetectActive(banded, 0, std::nullopt, none, config),
              ElementsAre(0, 1));
  // Duals decide when present.
  const std::vector<double> duals = {0.0, 1.0, 0.0, 0.0};
  EXPECT_THAT(DetectActive(exact, 0, std::span<const double>(duals), none, config),
              ElementsAre(1));
  // Frozen rows are never returned; argmax fallback keeps the set non-empty.
  std::vector<std::optional<double>> frozen = {0.0, 0.0, std::nullopt,
                                               std::nullopt};
  EXPECT_THAT(DetectActive(std::vector<double>{0, 0, -2, -3}, 0, std::nullopt,
                           frozen, config),
              ElementsAre(2));
}

TEST(DetectActiveTest, PrisonersDilemmaStageOne) {
  const auto pd = BuildCceConstraintMatrix(PrisonersDilemma());
  std::vector<std::optional<double>> none(4);
  const StageSolution stage = SolveStage(pd, none);
  const std::vector<double> gains(stage.row_gains.begin(), stage.row_gains.end());
  const SolverConfig config;
  EXPECT_THAT(DetectActive(gains, stage.objective, std::nullopt, none, config),
              UnorderedElementsAre(pd.Row(0, 1), pd.Row(1, 1)));
}

TEST(CertifyRatingTest, DetectsCorruption) {
  const NormalFormGame game = BiasedShapleyWithNash();
  RatingResult result = DeviationRating(game);
  EXPECT_LE(CertifyRating(game, result).max_gain_error, kRatingTol);
  result.ratings[1][2] += 0.25;
  EXPECT_GE(CertifyRating(game, result).max_gain_error, 0.25 - 1e-9);
}

TEST(CertifyRatingTest, DetectsNonEquilibrium) {
  const NormalFormGame game = PrisonersDilemma();
  RatingResult result = DeviationRating(game);
  result.equilibrium = JointDistribution::PointMass(4, 0);
  EXPECT_NEAR(CertifyRating(game, result).cce_violation, 2.0, 1e-9);
}

TEST(DeviationRatingTest, MatchesVertexEnumerationOracle) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const Shape shape = trial % 2 == 0 ? Shape{2, 2} : Shape{2, 2, 2};
    const NormalFormGame game = RandomGame(shape, rng);
    const RatingResult result = DeviationRating(game);
    ExpectRatingsNear(result.ratings, testing::VertexEnumerationRating(game),
                      kRatingTol);
    ExpectValidResult(game, result);
  }
}

TEST(DeviationRatingTest, MatchesOracleOnStructuredGames) {
  for (const NormalFormGame& game :
       {MatchingPennies(), PrisonersDilemma(), BiasedShapley()}) {
    ExpectRatingsNear(DeviationRating(game).ratings,
                      testing::VertexEnumerationRating(game), kRatingTol);
  }
}

TEST(DeviationRatingTest, ScaleNormalizationDoesNotChangeRatings) {
  std::mt19937_64 rng(53);
  SolverConfig raw;
  raw.scale_normalize = false;
  for (int trial = 0; trial < 20; ++trial) {
    const NormalFormGame game = RandomGameOfSize(2, 3, 2, 3, rng);
    ExpectRatingsNear(DeviationRating(game).ratings,
                      DeviationRating(game, raw).ratings, kRatingTol);
  }
}

class InvarianceTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{59};
  NormalFormGame NextGame() { return RandomGameOfSize(2, 3, 2, 4, rng_); }
};

TEST_F(InvarianceTest, Permutation) {
  for (int trial = 0; trial < 50; ++trial) {
    const NormalFormGame game = NextGame();
    const int p = trial % game.num_players();
    std::vector<int> perm(game.num_strategies(p));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng_);
    const auto base = DeviationRating(game).ratings;
    const auto permuted = DeviationRating(PermuteStrategies(game, p, perm)).ratings;
    auto expected = base;
    for (size_t i = 0; i < perm.size(); ++i) expected[p][i] = base[p][perm[i]];
    ExpectRatingsNear(permuted, expected, kRatingTol);
  }
}

TEST_F(InvarianceTest, Clone) {
  for (int trial = 0; trial < 50; ++trial) {
    const NormalFormGame game = NextGame();
    const int p = trial % game.num_players();
    const int a = trial % game.num_strategies(p);
    const auto base = DeviationRating(game).ratings;
    const NormalFormGame cloned = CloneStrategy(game, p, a);
    const RatingResult result = DeviationRating(cloned);
    auto expected = base;
    expected[p].push_back(base[p][a]);
    ExpectRatingsNear(result.ratings, expected, kRatingTol);
    ExpectValidResult(cloned, result);
  }
}

TEST_F(InvarianceTest, Mixture) {
  for (int trial = 0; trial < 50; ++trial) {
    const NormalFormGame game = NextGame();
    const int p = trial % game.num_players();
    const auto weights = SampleDirichlet(game.num_strategies(p), 1.0, rng_);
    const auto base = DeviationRating(game).ratings;
    const RatingResult result = DeviationRating(MixStrategy(game, p, weights));
    auto expected = base;
    double mixed = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) mixed += weights[i] * base[p][i];
    expected[p].push_back(mixed);
    ExpectRatingsNear(result.ratings, expected, kRatingTol);
  }
}

TEST_F(InvarianceTest, Offset) {
  std::uniform_real_distribution<double> uniform(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const NormalFormGame game = NextGame();
    OffsetSpec spec{trial % game.num_players(), {}};
    spec.values.resize(game.num_opponent_joints(spec.player));
    for (double& v : spec.values) v = uniform(rng_);
    ExpectRatingsNear(DeviationRating(ApplyOffset(game, spec)).ratings,
                      DeviationRating(game).ratings, kRatingTol);
  }
}

TEST_F(InvarianceTest, DominanceAndBounds) {
  std::uniform_real_distribution<double> uniform(0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    NormalFormGame game = NextGame();
    const int p = trial % game.num_players();
    // Inject a copy of strategy 0 that is worse everywhere.
    game = CloneStrategy(game, p, 0);
    const int worse = game.num_strategies(p) - 1;
    auto payoffs = game.all_payoffs();
    for (int64_t j = 0; j < game.num_joints(); ++j) {
      if (game.ActionOf(j, p) == worse) payoffs[p][j] -= uniform(rng_);
    }
    const NormalFormGame dominated =
        NormalFormGame::Create(game.players(), game.strategies(), payoffs);
    const RatingResult result = DeviationRating(dominated);
    EXPECT_GE(result.ratings[p][0], result.ratings[p][worse] - 1e-7);
    EXPECT_TRUE(CertifyRating(dominated, result).ratings_within_bounds);
  }
}

TEST(DeviationRatingTest, StageCountWithinBound) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const NormalFormGame game = RandomGameOfSize(2, 3, 2, 4, rng);
    const RatingResult result = DeviationRating(game);
    EXPECT_LE(result.stage_count, game.total_strategies());
  }
}

TEST(RateConstraintRowsTest, DuplicateRowsShareRatings) {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, -1, 1, -1, -1, 1;
  const RowRating rating = RateConstraintRows(rows);
  EXPECT_NEAR(rating.values[0], rating.values[1], 1e-12);
  EXPECT_NEAR(rating.values[0], 0.0, 1e-9);
  EXPECT_NEAR(rating.values[2], 0.0, 1e-9);
}

}  // namespace
}  // namespace devrating
