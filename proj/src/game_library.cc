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

#include "devrating/game_library.h"

#include <string>

#include "devrating/errors.h"

namespace devrating {

NormalFormGame MatchingPennies() {
  return BuildGame({{"H", "T"}, {"H", "T"}},
                   {{1, -1, -1, 1}, {-1, 1, 1, -1}});
}

NormalFormGame PrisonersDilemma(double t, double r, double p, double s) {
  return SymmetricGame({"C", "D"}, {r, s, t, p});
}

NormalFormGame BiasedShapley() {
  return SymmetricGame({"R", "P", "S"},
                       {-8, -2, 4,
                         2, -8, -1,
                        -4, 1, -8});
}

std::vector<double> BiasedShapleyNash() {
  return {87.0 / 241, 100.0 / 241, 54.0 / 241};
}

NormalFormGame BiasedShapleyWithNash() {
  const double n = -680.0 / 241;
  return SymmetricGame({"R", "P", "S", "N"},
                       {-8, -2, 4, n,
                         2, -8, -1, n,
                        -4, 1, -8, n,
                        -712.0 / 241, -920.0 / 241, -184.0 / 241, n});
}

NormalFormGame SymmetricGame(const std::vector<std::string>& labels,
                             const std::vector<double>& row_payoffs) {
  const size_t n = labels.size();
  if (row_payoffs.size() != n * n) {
    throw InputError("symmetric game needs " + std::to_string(n * n) +
                     " payoffs");
  }
  std::vector<double> column_payoffs(n * n);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      column_payoffs[a * n + b] = row_payoffs[b * n + a];
    }
  }
  return BuildGame({labels, labels}, {row_payoffs, column_payoffs});
}

namespace {

std::vector<std::string> Labels(int count) {
  std::vector<std::string> labels;
  for (int i = 0; i < count; ++i) labels.push_back("s" + std::to_string(i));
  return labels;
}

}  // namespace

NormalFormGame RandomGame(const Shape& shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  int64_t joints = 1;
  for (int n : shape) joints *= n;
  std::vector<std::vector<std::string>> strategies;
  std::vector<std::vector<double>> payoffs(shape.size());
  for (size_t p = 0; p < shape.size(); ++p) {
    strategies.push_back(Labels(shape[p]));
    payoffs[p].resize(joints);
    for (double& v : payoffs[p]) v = uniform(rng);
  }
  return BuildGame(std::move(strategies), std::move(payoffs));
}

NormalFormGame RandomZeroSumGame(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> g1(rows * cols);
  for (double& v : g1) v = uniform(rng);
  std::vector<double> g2(g1.size());
  for (size_t i = 0; i < g1.size(); ++i) g2[i] = -g1[i];
  return BuildGame({Labels(rows), Labels(cols)}, {g1, g2});
}

NormalFormGame RandomSymmetricGame(int strategies, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> g1(strategies * strategies);
  for (double& v : g1) v = uniform(rng);
  return SymmetricGame(Labels(strategies), g1);
}

NormalFormGame RandomGameOfSize(int min_players, int max_players,
                                int min_strategies, int max_strategies,
                                std::mt19937_64& rng) {
  std::uniform_int_distribution<int> players(min_players, max_players);
  std::uniform_int_distribution<int> strategies(min_strategies,
                                                max_strategies);
  Shape shape(players(rng));
  for (int& n : shape) n = strategies(rng);
  return RandomGame(shape, rng);
}

std::vector<double> SampleDirichlet(int size, double alpha,
                                    std::mt19937_64& rng) {
  return SampleDirichlet(std::vector<double>(size, alpha), rng);
}

std::vector<double> SampleDirichlet(const std::vector<double>& alpha,
                                    std::mt19937_64& rng) {
  std::vector<double> draw(alpha.size());
  double total = 0.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0)) throw InputError("Dirichlet concentration must be > 0");
    std::gamma_distribution<double> gamma(alpha[i], 1.0);
    draw[i] = gamma(rng);
    total += draw[i];
  }
  if (total <= 0) {
    // Every gamma draw underflowed; fall back to the mode of the simplex.
    for (double& d : draw) d = 1.0 / draw.size();
    return draw;
  }
  for (double& d : draw) d /= total;
  return draw;
}

}  // namespace devrating
