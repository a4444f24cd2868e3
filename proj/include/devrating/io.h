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

#ifndef DEVRATING_IO_H_
#define DEVRATING_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "devrating/analysis.h"
#include "devrating/baselines.h"
#include "devrating/game.h"
#include "devrating/gamify.h"
#include "devrating/improvement_sim.h"
#include "devrating/rating.h"
#include "json.hpp"

namespace devrating {

using Json = nlohmann::ordered_json;

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double value);

// Whole file as a string; throws InputError if it cannot be read.
std::string ReadFile(const std::string& path);
// Writes through a temporary file in the same directory and renames it.
void WriteFileAtomic(const std::string& path, std::string_view contents);

// {"players": [...], "strategies": [[...], ...], "payoffs": [[...], ...]}
// with one flat row-major payoff array per player.
NormalFormGame ParseGameJson(std::string_view text);
Json GameToJson(const NormalFormGame& game);

// Splits CSV text into rows of trimmed fields. Supports double-quoted
// fields with "" escapes; blank lines are skipped.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// First column model labels, header row task labels.
ScoreTable ParseScoreTableCsv(std::string_view text);
std::string ScoreTableToCsv(const ScoreTable& table);

// Square matrix with strategy labels on the header row and first column.
WinProbMatrix ParseWinProbCsv(std::string_view text);
std::string WinProbToCsv(const WinProbMatrix& wins);

// {player: {strategy: value}}
Json RatingsToJson(const NormalFormGame& game,
                   const std::vector<std::vector<double>>& ratings);
Json CertificateToJson(const RatingCertificate& cert);
// {"ratings", "equilibrium", "freeze_log", "certificate"}
Json RatingResultToJson(const NormalFormGame& game, const RatingResult& result,
                        const RatingCertificate& cert);

// Models as rows, tasks as columns and a trailing "rating" column holding
// each row sum.
std::string ContributionsToCsv(const ContributionMatrix& contributions);

// iteration, gap, avg_payoff_<player>..., culled_<player>... where culled
// ids are joined with ';'.
std::string TrajectoryToCsv(const NormalFormGame& full,
                            const Trajectory& trajectory);

}  // namespace devrating

#endif  // DEVRATING_IO_H_
