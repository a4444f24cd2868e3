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

#include "devrating/io.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "devrating/errors.h"

namespace devrating {
namespace {

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

double ParseNumber(const std::string& field, int row, int col) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw InputError("row " + std::to_string(row + 1) + ", column " +
                     std::to_string(col + 1) + ": '" + field +
                     "' is not a number");
  }
  return value;
}

template <typename T>
T JsonField(const Json& json, const char* key) {
  if (!json.contains(key)) {
    throw InputError(std::string("game JSON lacks \"") + key + "\"");
  }
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("game JSON field \"") + key +
                     "\" has the wrong type: " + e.what());
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

void WriteFileAtomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("failed writing '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) throw InputError("cannot move output into '" + path + "': " + ec.message());
}

NormalFormGame ParseGameJson(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed game JSON: ") + e.what());
  }
  if (!json.is_object()) throw InputError("game JSON must be an object");
  auto strategies = JsonField<std::vector<std::vector<std::string>>>(json, "strategies");
  auto payoffs = JsonField<std::vector<std::vector<double>>>(json, "payoffs");
  std::vector<std::string> players;
  if (json.contains("players")) {
    players = JsonField<std::vector<std::string>>(json, "players");
  }
  return NormalFormGame::Create(std::move(players), std::move(strategies),
                                std::move(payoffs));
}

Json GameToJson(const NormalFormGame& game) {
  Json json;
  json["players"] = game.players();
  json["strategies"] = game.strategies();
  json["payoffs"] = game.all_payoffs();
  return json;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  auto end_field = [&] {
    row.push_back(was_quoted ? field : Trim(field));
    field.clear();
    was_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else {
      field += c;
    }
  }
  if (quoted) throw InputError("unterminated quoted CSV field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

ScoreTable ParseScoreTableCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.size() < 2 || rows[0].size() < 2) {
    throw InputError("score table CSV needs a header row and at least one "
                     "model row and task column");
  }
  const std::vector<std::string> tasks(rows[0].begin() + 1, rows[0].end());
  std::vector<std::string> models;
  Eigen::MatrixXd scores(rows.size() - 1, tasks.size());
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw InputError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(rows[r].size()) + " fields, expected " +
                       std::to_string(rows[0].size()));
    }
    models.push_back(rows[r][0]);
    for (size_t c = 0; c < tasks.size(); ++c) {
      scores(r - 1, c) = ParseNumber(rows[r][c + 1], r, c + 1);
    }
  }
  return ScoreTable::Create(std::move(models), tasks, std::move(scores));
}

std::string ScoreTableToCsv(const ScoreTable& table) {
  std::ostringstream out;
  out << "model";
  for (const auto& t : table.tasks()) out << ',' << t;
  out << '\n';
  for (int i = 0; i < table.num_models(); ++i) {
    out << table.models()[i];
    for (int k = 0; k < table.num_tasks(); ++k) {
      out << ',' << FormatDouble(table.scores()(i, k));
    }
    out << '\n';
  }
  return out.str();
}

WinProbMatrix ParseWinProbCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.empty()) throw InputError("win-probability CSV is empty");
  const std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
  const size_t n = labels.size();
  if (rows.size() != n + 1) {
    throw InputError("win-probability CSV must be square");
  }
  Eigen::MatrixXd probs(n, n);
  for (size_t r = 1; r <= n; ++r) {
    if (rows[r].size() != n + 1 || rows[r][0] != labels[r - 1]) {
      throw InputError("win-probability CSV row " + std::to_string(r + 1) +
                       " does not match the header");
    }
    for (size_t c = 0; c < n; ++c) {
      probs(r - 1, c) = ParseNumber(rows[r][c + 1], r, c + 1);
    }
  }
  return WinProbMatrix::Create(labels, std::move(probs));
}

std::string WinProbToCsv(const WinProbMatrix& wins) {
  std::ostringstream out;
  out << "strategy";
  for (const auto& l : wins.labels()) out << ',' << l;
  out << '\n';
  for (int i = 0; i < wins.size(); ++i) {
    out << wins.labels()[i];
    for (int j = 0; j < wins.size(); ++j) out << ',' << FormatDouble(wins.probs()(i, j));
    out << '\n';
  }
  return out.str();
}

Json RatingsToJson(const NormalFormGame& game,
                   const std::vector<std::vector<double>>& ratings) {
  Json json = Json::object();
  for (size_t p = 0; p < ratings.size(); ++p) {
    Json player = Json::object();
    for (size_t a = 0; a < ratings[p].size(); ++a) {
      player[game.strategy_labels(p)[a]] = ratings[p][a];
    }
    json[game.player_name(p)] = std::move(player);
  }
  return json;
}

Json CertificateToJson(const RatingCertificate& cert) {
  return Json{{"valid", cert.Valid()},
              {"max_gain_error", cert.max_gain_error},
              {"cce_violation", cert.cce_violation},
              {"num_deviations", cert.num_deviations},
              {"stage_count", cert.stage_count},
              {"stage_count_within_bound", cert.stage_count_within_bound},
              {"stage_objectives_monotone", cert.stage_objectives_monotone},
              {"ratings_within_bounds", cert.ratings_within_bounds}};
}

Json RatingResultToJson(const NormalFormGame& game, const RatingResult& result,
                        const RatingCertificate& cert) {
  Json json;
  json["ratings"] = RatingsToJson(game, result.ratings);
  json["equilibrium"] = std::vector<double>(result.equilibrium.probs().begin(),
                                            result.equilibrium.probs().end());
  Json log = Json::array();
  for (const FreezeEvent& event : result.freeze_log) {
    Json frozen = Json::array();
    for (const Deviation& d : event.frozen) {
      frozen.push_back({{"player", game.player_name(d.player)},
                        {"strategy", game.strategy_labels(d.player)[d.strategy]}});
    }
    log.push_back({{"iteration", event.iteration},
                   {"frozen", std::move(frozen)},
                   {"objective", event.objective}});
  }
  json["freeze_log"] = std::move(log);
  json["stage_count"] = result.stage_count;
  json["certificate"] = CertificateToJson(cert);
  return json;
}

std::string ContributionsToCsv(const ContributionMatrix& contributions) {
  std::ostringstream out;
  out << "model";
  for (const auto& t : contributions.tasks) out << ',' << t;
  out << ",rating\n";
  for (size_t m = 0; m < contributions.models.size(); ++m) {
    out << contributions.models[m];
    double total = 0.0;
    for (size_t t = 0; t < contributions.tasks.size(); ++t) {
      const double v = contributions.values(m, t);
      total += v;
      out << ',' << FormatDouble(v);
    }
    out << ',' << FormatDouble(total) << '\n';
  }
  return out.str();
}

std::string TrajectoryToCsv(const NormalFormGame& full,
                            const Trajectory& trajectory) {
  std::ostringstream out;
  out << "iteration,gap";
  for (const auto& p : full.players()) out << ",avg_payoff_" << p;
  for (const auto& p : full.players()) out << ",culled_" << p;
  out << '\n';
  for (size_t i = 0; i < trajectory.records.size(); ++i) {
    const IterationRecord& r = trajectory.records[i];
    out << i << ',' << FormatDouble(r.cce_gap);
    for (double v : r.avg_payoff) out << ',' << FormatDouble(v);
    for (const auto& ids : r.culled) {
      out << ',';
      for (size_t k = 0; k < ids.size(); ++k) out << (k ? ";" : "") << ids[k];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace devrating
