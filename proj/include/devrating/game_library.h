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

#ifndef DEVRATING_GAME_LIBRARY_H_
#define DEVRATING_GAME_LIBRARY_H_

#include <random>
#include <vector>

#include "devrating/game.h"

namespace devrating {

// Canonical small games.
NormalFormGame MatchingPennies();
// Row player payoffs (C,C)=R, (C,D)=S, (D,C)=T, (D,D)=P; symmetric.
NormalFormGame PrisonersDilemma(double t = 5, double r = 3, double p = 1,
                                double s = 0);

// Shapley's anti-coordination rock-paper-scissors with biased payoffs,
// strategies R, P, S.
NormalFormGame BiasedShapley();
// Its unique mixed Nash equilibrium (87, 100, 54) / 241.
std::vector<double> BiasedShapleyNash();
// BiasedShapley augmented with the Nash mixture as a fourth strategy "N".
NormalFormGame BiasedShapleyWithNash();

// Symmetric two-player game from the row player's payoff matrix
// (row-major, n x n): G_2(a, b) = G_1(b, a).
NormalFormGame SymmetricGame(const std::vector<std::string>& labels,
                             const std::vector<double>& row_payoffs);

// Random games with payoffs i.i.d. uniform on [-1, 1].
NormalFormGame RandomGame(const Shape& shape, std::mt19937_64& rng);
NormalFormGame RandomZeroSumGame(int rows, int cols, std::mt19937_64& rng);
NormalFormGame RandomSymmetricGame(int strategies, std::mt19937_64& rng);
// Uniformly chosen player count in [min_players, max_players] and strategy
// counts in [min_strategies, max_strategies].
NormalFormGame RandomGameOfSize(int min_players, int max_players,
                                int min_strategies, int max_strategies,
                                std::mt19937_64& rng);

// Dirichlet(alpha, ..., alpha) draw of dimension `size`.
std::vector<double> SampleDirichlet(int size, double alpha,
                                    std::mt19937_64& rng);
std::vector<double> SampleDirichlet(const std::vector<double>& alpha,
                                    std::mt19937_64& rng);

}  // namespace devrating

#endif  // DEVRATING_GAME_LIBRARY_H_
