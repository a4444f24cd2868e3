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

#include "devrating/cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "devrating/analysis.h"
#include "devrating/baselines.h"
#include "devrating/errors.h"
#include "devrating/game_library.h"
#include "devrating/gamify.h"
#include "devrating/improvement_sim.h"
#include "devrating/io.h"
#include "devrating/rating.h"

namespace devrating {
namespace {

namespace fs = std::filesystem;

constexpr double kZeroSumTol = 1e-9;

// Tags errors with the pipeline stage that raised them.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what, int code)
      : std::runtime_error("[" + stage + "] " + what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

template <typename F>
auto Stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const InputError& e) {
    throw StageError(name, e.what(), kExitInputError);
  } catch (const SolverError& e) {
    throw StageError(name, e.what(), kExitSolverError);
  } catch (const fs::filesystem_error& e) {
    throw StageError(name, e.what(), kExitInputError);
  }
}

// Collects the files a run reads and writes for its manifest.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)) {}

  void AddInput(const std::string& path, std::string_view contents) {
    inputs_.push_back({{"path", path}, {"sha256", Sha256Hex(contents)}});
  }
  void AddOutput(const std::string& path, std::string_view contents) {
    outputs_.push_back({{"path", path}, {"sha256", Sha256Hex(contents)}});
  }
  Json& config() { return config_; }
  void set_seed(uint64_t seed) { seed_ = seed; }

  void Write(const std::string& path) const {
    Json json;
    json["tool"] = "devrating";
    json["version"] = kToolVersion;
    json["command"] = command_;
    json["argv"] = argv_;
    json["inputs"] = inputs_;
    json["config"] = config_;
    if (seed_.has_value()) json["seed"] = *seed_;
    json["outputs"] = outputs_;
    WriteFileAtomic(path, json.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
  Json config_ = Json::object();
  std::optional<uint64_t> seed_;
};

void WriteOutput(Manifest& manifest, const std::string& path,
                 const std::string& contents) {
  WriteFileAtomic(path, contents);
  manifest.AddOutput(path, contents);
}

bool IsZeroSumTwoPlayer(const NormalFormGame& game) {
  if (game.num_players() != 2) return false;
  for (int64_t j = 0; j < game.num_joints(); ++j) {
    if (std::fabs(game.payoff(0, j) + game.payoff(1, j)) > kZeroSumTol) {
      return false;
    }
  }
  return true;
}

// Per-player affine map of ratings onto [-1, 0] for plots.
std::string PlotData(const NormalFormGame& game,
                     const std::vector<std::vector<double>>& ratings) {
  std::ostringstream out;
  out << "player,strategy,rating,display\n";
  for (size_t p = 0; p < ratings.size(); ++p) {
    const auto [lo, hi] = std::minmax_element(ratings[p].begin(), ratings[p].end());
    for (size_t a = 0; a < ratings[p].size(); ++a) {
      const double display =
          *hi > *lo ? (ratings[p][a] - *hi) / (*hi - *lo) : 0.0;
      out << game.player_name(p) << ',' << game.strategy_labels(p)[a] << ','
          << FormatDouble(ratings[p][a]) << ',' << FormatDouble(display) << '\n';
    }
  }
  return out.str();
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct RateOptions {
  std::string input;
  std::string format = "auto";
  std::string gamify = "none";
  std::string method = "deviation";
  std::string output;
  std::string plot_data;
  double tol = 1e-8;
  bool normalize = false;
  bool no_reduce = false;
};

struct ContributionOptions {
  std::string input;
  std::string output;
  std::string player = kModelPlayerA;
  double tol = 1e-8;
  bool no_reduce = false;
};

struct SimulateOptions {
  std::string game = "random";
  int size = 3;
  int players = 2;
  std::string rater = "deviation";
  int iters = 200;
  int seeds = 20;
  uint64_t seed = 0;
  int pop_size = 8;
  double cull_fraction = 0.25;
  std::string output;
};

struct CheckOptions {
  std::string input;
  std::string property;
  std::string rater = "deviation";
  int trials = 100;
  uint64_t seed = 0;
  double tol = 1e-6;
  std::string output;
};

SolverConfig MakeSolverConfig(double tol) {
  SolverConfig config;
  config.active_tol = tol;
  ValidateConfig(config);
  return config;
}

// The deviation rating of a model vs model vs task game, optionally through
// the (A, B)-symmetric reduced system.
RatingResult RateTableGame(const NormalFormGame& game, const SolverConfig& config,
                           bool reduce) {
  return reduce ? ReducedDeviationRating(game, {{0, 1}}, config)
                : DeviationRating(game, config);
}

int CmdRate(const RateOptions& opt, Manifest& manifest, std::ostream& out) {
  std::string format = opt.format;
  if (format == "auto") {
    format = fs::path(opt.input).extension() == ".csv" ? "scoretable-csv"
                                                       : "game-json";
  }
  manifest.config() = {{"format", format},        {"gamify", opt.gamify},
                       {"method", opt.method},    {"tol", opt.tol},
                       {"normalize", opt.normalize},
                       {"reduce", !opt.no_reduce}};
  if (format == "game-json" && opt.gamify != "none") {
    throw StageError("arguments", "--gamify applies only to score tables",
                     kExitInputError);
  }
  if (format == "scoretable-csv" && opt.gamify == "none") {
    throw StageError("arguments", "score tables need --gamify 3p or 2pzs",
                     kExitInputError);
  }
  const std::string text = Stage("read input", [&] { return ReadFile(opt.input); });
  manifest.AddInput(opt.input, text);

  Json metadata = Json::object();
  const NormalFormGame game = Stage("parse input", [&] {
    if (format == "game-json") return ParseGameJson(text);
    const ScoreTable table = ParseScoreTableCsv(text);
    if (opt.gamify == "3p") {
      if (opt.normalize) {
        const NormalizedTable normalized = NormalizePerTask(table);
        metadata["constant_tasks"] = normalized.constant_tasks;
        return GameFromTable3p(normalized.table);
      }
      return GameFromTable3p(table);
    }
    if (opt.normalize) {
      metadata["constant_tasks"] = NormalizePerTask(table).constant_tasks;
    }
    return GameFromTable2pzs(table, opt.normalize);
  });

  Json json;
  json["method"] = opt.method;
  std::vector<std::vector<double>> ratings;
  if (opt.method == "deviation") {
    const SolverConfig config = Stage("arguments", [&] { return MakeSolverConfig(opt.tol); });
    const bool reduce = opt.gamify == "3p" && !opt.no_reduce;
    const RatingResult result = Stage("rate", [&] {
      return reduce ? RateTableGame(game, config, true) : DeviationRating(game, config);
    });
    const RatingCertificate cert = CertifyRating(game, result);
    const Json rated = RatingResultToJson(game, result, cert);
    for (const auto& [key, value] : rated.items()) json[key] = value;
    ratings = result.ratings;
  } else if (opt.method == "uniform") {
    ratings = UniformRating(game);
    json["ratings"] = RatingsToJson(game, ratings);
  } else if (opt.method == "elo") {
    if (game.num_players() < 2 || game.strategies()[0] != game.strategies()[1]) {
      throw StageError("rate", "elo requires two players with a shared strategy set",
                       kExitInputError);
    }
    const EloResult elo = Stage("rate", [&] { return EloFit(MarginWinProbs(game)); });
    ratings = {elo.ratings, elo.ratings};
    json["ratings"] = RatingsToJson(game, ratings);
    const EloConfig defaults;
    json["elo"] = {{"scale", defaults.scale}, {"base", defaults.base},
                   {"iterations", elo.iterations}, {"loss", elo.loss},
                   {"gradient_norm", elo.gradient_norm}};
  } else if (opt.method == "nash-avg") {
    if (!IsZeroSumTwoPlayer(game)) {
      throw StageError("rate", "nash-avg requires two-player zero-sum",
                       kExitInputError);
    }
    const NashAveragingResult na = Stage("rate", [&] { return NashAveraging2pzs(game); });
    ratings = na.ratings;
    json["ratings"] = RatingsToJson(game, ratings);
    json["equilibrium"] = na.equilibrium;
    json["value"] = na.value;
    json["unique"] = na.unique;
  }
  if (!metadata.empty()) json["metadata"] = metadata;

  Stage("write output", [&] {
    WriteOutput(manifest, opt.output, json.dump(2) + "\n");
    if (!opt.plot_data.empty()) {
      WriteOutput(manifest, opt.plot_data, PlotData(game, ratings));
    }
    manifest.Write(opt.output + ".manifest.json");
  });
  out << "wrote " << opt.output << "\n";
  return kExitOk;
}

int CmdContributions(const ContributionOptions& opt, Manifest& manifest,
                     std::ostream& out) {
  manifest.config() = {{"player", opt.player}, {"tol", opt.tol},
                       {"reduce", !opt.no_reduce}};
  const std::string text = Stage("read input", [&] { return ReadFile(opt.input); });
  manifest.AddInput(opt.input, text);
  const NormalFormGame game =
      Stage("parse input", [&] { return GameFromTable3p(ParseScoreTableCsv(text)); });
  const int player = Stage("arguments", [&] {
    const int p = game.PlayerIndex(opt.player);
    if (p > 1) throw InputError("--player must name a model player (A or B)");
    return p;
  });
  const SolverConfig config = Stage("arguments", [&] { return MakeSolverConfig(opt.tol); });
  const RatingResult result =
      Stage("rate", [&] { return RateTableGame(game, config, !opt.no_reduce); });
  const ContributionMatrix contributions =
      Stage("contributions", [&] { return TaskContributions(game, result, player); });
  Stage("write output", [&] {
    WriteOutput(manifest, opt.output, ContributionsToCsv(contributions));
    manifest.Write(opt.output + ".manifest.json");
  });
  out << "wrote " << opt.output << "\n";
  return kExitOk;
}

int CmdSimulate(const SimulateOptions& opt, Manifest& manifest,
                const std::vector<std::string>& /*argv*/, std::ostream& out) {
  manifest.config() = {{"game", opt.game},         {"size", opt.size},
                       {"players", opt.players},   {"rater", opt.rater},
                       {"iters", opt.iters},       {"seeds", opt.seeds},
                       {"pop_size", opt.pop_size}, {"cull_fraction", opt.cull_fraction},
                       {"gap_distribution", opt.rater == "deviation"
                                                ? "deviation-rating equilibrium"
                                                : "uniform over member tuples"},
                       {"avg_payoff", "uniform over member tuples"}};
  manifest.set_seed(opt.seed);
  const PopulationRater rater = Stage("arguments", [&] {
    if (opt.seeds < 1) throw InputError("--seeds must be at least 1");
    if (opt.size < 1 || opt.players < 1) {
      throw InputError("--size and --players must be positive");
    }
    return ParsePopulationRater(opt.rater);
  });
  std::optional<NormalFormGame> fixed;
  if (opt.game == "shapley") {
    fixed = BiasedShapley();
  } else if (opt.game != "random") {
    const std::string text = Stage("read input", [&] { return ReadFile(opt.game); });
    manifest.AddInput(opt.game, text);
    fixed = Stage("parse input", [&] { return ParseGameJson(text); });
  }

  std::vector<std::vector<double>> gaps;
  std::vector<std::vector<std::vector<double>>> payoffs;
  std::vector<std::string> players;
  for (int k = 0; k < opt.seeds; ++k) {
    const uint64_t seed = opt.seed + static_cast<uint64_t>(k);
    std::seed_seq game_seq{seed, uint64_t{0x67616d65}};
    std::mt19937_64 game_rng(game_seq);
    const NormalFormGame full =
        fixed.has_value() ? *fixed
                          : RandomGame(Shape(opt.players, opt.size), game_rng);
    ImprovementConfig config;
    config.pop_size = opt.pop_size;
    config.cull_fraction = opt.cull_fraction;
    config.iters = opt.iters;
    config.seed = seed;
    const Trajectory trajectory = Stage("simulate seed " + std::to_string(seed),
                                        [&] { return RunImprovementLoop(full, rater, config); });
    players = full.players();
    Stage("write output", [&] {
      WriteOutput(manifest,
                  (fs::path(opt.output) / ("trajectory_seed" + std::to_string(seed) + ".csv"))
                      .string(),
                  TrajectoryToCsv(full, trajectory));
    });
    for (size_t i = 0; i < trajectory.records.size(); ++i) {
      if (gaps.size() <= i) {
        gaps.emplace_back();
        payoffs.emplace_back(full.num_players());
      }
      gaps[i].push_back(trajectory.records[i].cce_gap);
      for (int p = 0; p < full.num_players(); ++p) {
        payoffs[i][p].push_back(trajectory.records[i].avg_payoff[p]);
      }
    }
  }
  std::ostringstream aggregate;
  aggregate << "iteration,median_gap";
  for (const auto& p : players) aggregate << ",median_avg_payoff_" << p;
  aggregate << '\n';
  for (size_t i = 0; i < gaps.size(); ++i) {
    aggregate << i << ',' << FormatDouble(Median(gaps[i]));
    for (const auto& per_player : payoffs[i]) {
      aggregate << ',' << FormatDouble(Median(per_player));
    }
    aggregate << '\n';
  }
  Stage("write output", [&] {
    WriteOutput(manifest, (fs::path(opt.output) / "aggregate.csv").string(),
                aggregate.str());
    manifest.Write((fs::path(opt.output) / "manifest.json").string());
  });
  out << "wrote " << opt.seeds << " trajectories to " << opt.output << "\n";
  return kExitOk;
}

int CmdCheck(const CheckOptions& opt, Manifest& manifest, std::ostream& out) {
  manifest.config() = {{"property", opt.property}, {"rater", opt.rater},
                       {"trials", opt.trials},     {"tol", opt.tol}};
  manifest.set_seed(opt.seed);
  const Property property = Stage("arguments", [&] {
    if (opt.trials < 1) throw InputError("--trials must be at least 1");
    return ParseProperty(opt.property);
  });
  Rater rater;
  if (opt.rater == "deviation") {
    rater = [](const NormalFormGame& g) { return DeviationRating(g).ratings; };
  } else if (opt.rater == "uniform") {
    rater = [](const NormalFormGame& g) { return UniformRating(g); };
  } else {
    throw StageError("arguments", "unknown rater '" + opt.rater + "'", kExitInputError);
  }
  std::optional<NormalFormGame> fixed;
  if (!opt.input.empty()) {
    const std::string text = Stage("read input", [&] { return ReadFile(opt.input); });
    manifest.AddInput(opt.input, text);
    fixed = Stage("parse input", [&] { return ParseGameJson(text); });
  }
  PropertyOptions options;
  options.tolerance = opt.tol;
  std::mt19937_64 rng(opt.seed);
  int passed = 0;
  double worst = 0.0;
  std::optional<Json> witness;
  for (int trial = 0; trial < opt.trials; ++trial) {
    const NormalFormGame game =
        fixed.has_value() ? *fixed : RandomGameOfSize(2, 3, 2, 4, rng);
    const uint64_t trial_seed = rng();
    const PropertyReport report = Stage("check trial " + std::to_string(trial), [&] {
      return CheckProperty(game, property, rater, trial_seed, options);
    });
    worst = std::max(worst, report.max_deviation);
    if (report.passed) {
      ++passed;
    } else if (!witness.has_value()) {
      witness = Json{{"property", ToString(property)},
                     {"rater", opt.rater},
                     {"trial", trial},
                     {"trial_seed", trial_seed},
                     {"max_deviation", report.max_deviation},
                     {"detail", report.detail},
                     {"game", GameToJson(game)}};
      if (report.transformed.has_value()) {
        (*witness)["transformed"] = GameToJson(*report.transformed);
      }
    }
  }
  out << ToString(property) << " with " << opt.rater << " rater: " << passed
      << "/" << opt.trials << " passed, worst deviation "
      << FormatDouble(worst) << "\n";
  const std::string dir = opt.output.empty() ? "." : opt.output;
  if (witness.has_value()) {
    const std::string path = (fs::path(dir) / "witness.json").string();
    Stage("write output", [&] { WriteOutput(manifest, path, witness->dump(2) + "\n"); });
    out << "witness written to " << path << "\n";
  }
  if (!opt.output.empty()) {
    Stage("write output",
          [&] { manifest.Write((fs::path(opt.output) / "manifest.json").string()); });
  }
  return witness.has_value() ? kExitCheckFailed : kExitOk;
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Deviation ratings for normal-form games", "devrating"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RateOptions rate;
  CLI::App* rate_cmd = app.add_subcommand("rate", "Rate the strategies of a game");
  rate_cmd->add_option("--input", rate.input, "Game JSON or score-table CSV")->required();
  rate_cmd->add_option("--format", rate.format, "Input format")
      ->check(CLI::IsMember({"auto", "game-json", "scoretable-csv"}));
  rate_cmd->add_option("--gamify", rate.gamify, "Score-table construction")
      ->check(CLI::IsMember({"none", "3p", "2pzs"}));
  rate_cmd->add_option("--method", rate.method, "Rating method")
      ->check(CLI::IsMember({"deviation", "uniform", "elo", "nash-avg"}));
  rate_cmd->add_option("--tol", rate.tol, "Active-constraint tolerance");
  rate_cmd->add_flag("--normalize", rate.normalize, "Normalize scores per task");
  rate_cmd->add_flag("--no-reduce", rate.no_reduce,
                     "Rate 3p games without the symmetric reduction");
  rate_cmd->add_option("--plot-data", rate.plot_data,
                       "Also write ratings rescaled to [-1, 0] per player");
  rate_cmd->add_option("--output", rate.output, "Rating JSON path")->required();

  ContributionOptions contrib;
  CLI::App* contrib_cmd =
      app.add_subcommand("contributions", "Per-task decomposition of model ratings");
  contrib_cmd->add_option("--input", contrib.input, "Score-table CSV")->required();
  contrib_cmd->add_option("--player", contrib.player, "Model player (A or B)");
  contrib_cmd->add_option("--tol", contrib.tol, "Active-constraint tolerance");
  contrib_cmd->add_flag("--no-reduce", contrib.no_reduce,
                        "Rate without the symmetric reduction");
  contrib_cmd->add_option("--output", contrib.output, "Contribution CSV path")->required();

  SimulateOptions sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run the population improvement loop");
  sim_cmd->add_option("--game", sim.game,
                      "Full game: random, shapley or a game JSON path");
  sim_cmd->add_option("--size", sim.size, "Strategies per player (random)");
  sim_cmd->add_option("--players", sim.players, "Players (random)");
  sim_cmd->add_option("--rater", sim.rater, "deviation or uniform");
  sim_cmd->add_option("--iters", sim.iters, "Iterations per seed");
  sim_cmd->add_option("--seeds", sim.seeds, "Number of seeds");
  sim_cmd->add_option("--seed", sim.seed, "First seed");
  sim_cmd->add_option("--pop-size", sim.pop_size, "Members per player");
  sim_cmd->add_option("--cull-fraction", sim.cull_fraction, "Fraction culled");
  sim_cmd->add_option("--output", sim.output, "Output directory")->required();

  CheckOptions check;
  CLI::App* check_cmd = app.add_subcommand("check", "Randomized property checks");
  check_cmd->add_option("--input", check.input, "Game JSON (default: random games)");
  check_cmd->add_option("--property", check.property,
                        "clone, mixture, offset, dominance, bounds or permutation")
      ->required();
  check_cmd->add_option("--rater", check.rater, "deviation or uniform");
  check_cmd->add_option("--trials", check.trials, "Number of trials");
  check_cmd->add_option("--seed", check.seed, "Seed");
  check_cmd->add_option("--tol", check.tol, "Pass tolerance");
  check_cmd->add_option("--output", check.output, "Directory for witness and manifest");

  std::string manifest_path;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest_path, "Manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Manifest manifest(command, args);
  try {
    if (rate_cmd->parsed()) return CmdRate(rate, manifest, out);
    if (contrib_cmd->parsed()) return CmdContributions(contrib, manifest, out);
    if (sim_cmd->parsed()) return CmdSimulate(sim, manifest, args, out);
    if (check_cmd->parsed()) return CmdCheck(check, manifest, out);
    const Json recorded = Stage("read manifest", [&] {
      try {
        return Json::parse(ReadFile(manifest_path));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
      }
    });
    if (!recorded.contains("argv") || !recorded["argv"].is_array()) {
      throw StageError("read manifest", "manifest has no argv", kExitInputError);
    }
    const auto argv = recorded["argv"].get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay") {
      throw StageError("read manifest", "manifest records a replay", kExitInputError);
    }
    return RunCli(argv, out, err);
  } catch (const StageError& e) {
    err << "error " << e.what() << "\n";
    return e.code();
  } catch (const InputError& e) {
    err << "error [input] " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolverError& e) {
    err << "error [solver] " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    err << "error [internal] " << e.what() << "\n";
    return kExitSolverError;
  }
}

}  // namespace devrating
