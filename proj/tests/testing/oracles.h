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

#ifndef DEVRATING_TESTS_TESTING_ORACLES_H_
#define DEVRATING_TESTS_TESTING_ORACLES_H_

#include <vector>

#include "Eigen/Core"
#include "devrating/game.h"

// Reference implementations used only by tests. They take deliberately
// different routes from the library: explicit joint-action vectors instead
// of strides, and exhaustive vertex enumeration instead of simplex.
namespace devrating::testing {

// G_p(a) looked up through an explicit action vector.
double PayoffAt(const NormalFormGame& game, int player,
                const std::vector<int>& actions);

// Sum over recommendations of the pairwise gains, by explicit enumeration.
double SummedPairwiseGain(const NormalFormGame& game,
                          const std::vector<double>& sigma, int player,
                          int deviation);

// Rows (p, a') over joints, built from action vectors.
Eigen::MatrixXd NaiveConstraintRows(const NormalFormGame& game);

// The sequential min-max rating with every stage LP solved by enumerating
// the vertices of its feasible polyhedron. A constraint is frozen when it is
// tight at every optimal vertex. Exponential; only for tiny games.
std::vector<std::vector<double>> VertexEnumerationRating(
    const NormalFormGame& game);

}  // namespace devrating::testing

#endif  // DEVRATING_TESTS_TESTING_ORACLES_H_
