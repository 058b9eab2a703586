// Copyright 2026 The efgfom Authors
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


#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "efgfom/dgf.h"
#include "efgfom/error.h"
#include "efgfom/games.h"
#include "efgfom/scext.h"
#include "efgfom/solver.h"
#include "efgfom/validate.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace efgfom;

namespace {

GameInstance Builtin(const std::string& name, std::optional<int> ranks) {
  if (name == "kuhn") return GenerateKuhn();
  if (name == "leduc") {
    if (!ranks) throw Error(ErrorKind::kInvalidParameter, "leduc requires --ranks");
    return GenerateLeduc(*ranks);
  }
  throw Error(ErrorKind::kUnknownGame, "unknown game '" + name + "'");
}

std::string Fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string Compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// |J1| |J2| |Sigma1| |Sigma2| leaves | beta mean/max | gamma mean/max, the
// weights taken on player 1.
std::string StatsLine(const GameInstance& g) {
  const WeightStats beta = Summarize(ComputeBeta(g.treeplex_x));
  const WeightStats gamma = Summarize(ComputeGammaW(g.treeplex_x).gamma);
  std::ostringstream out;
  out << g.treeplex_x.num_decision_points() << ' ' << g.treeplex_y.num_decision_points()
      << ' ' << g.treeplex_x.num_sequences() << ' ' << g.treeplex_y.num_sequences() << ' '
      << (g.num_leaves ? std::to_string(*g.num_leaves) : std::string("-")) << " | beta "
      << Fixed4(beta.mean) << '/' << Compact(beta.max) << " | gamma " << Fixed4(gamma.mean)
      << '/' << Compact(gamma.max);
  return out.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIoError, "write failed for " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string UtcStamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

struct SourceArgs {
  std::string game;
  std::optional<int> ranks;
  std::string game_file;
  std::string chain_file;
};

void AddSourceOptions(CLI::App* cmd, SourceArgs& s) {
  auto* g = cmd->add_option("--game", s.game, "builtin game: kuhn | leduc");
  cmd->add_option("--ranks", s.ranks, "number of ranks for leduc");
  auto* gf = cmd->add_option("--game-file", s.game_file, "game JSON file");
  auto* cf = cmd->add_option("--chain-file", s.chain_file,
                             "chain file with an opponent chain and payoff");
  g->excludes(gf)->excludes(cf);
  gf->excludes(cf);
}

ordered_json SourceJson(const SourceArgs& s) {
  ordered_json j;
  if (!s.game.empty()) {
    j["kind"] = "builtin";
    j["name"] = s.game;
    if (s.ranks) j["ranks"] = *s.ranks;
  } else if (!s.game_file.empty()) {
    j["kind"] = "game_file";
    j["path"] = s.game_file;
  } else {
    j["kind"] = "chain_file";
    j["path"] = s.chain_file;
  }
  return j;
}

int RunGenerate(const std::string& name, std::optional<int> ranks, std::string out) {
  const GameInstance game = Builtin(name, ranks);
  if (out.empty()) out = game.name + ".json";
  SaveGame(game, out);
  std::cout << StatsLine(game) << "\n";
  return 0;
}

struct SolveArgs {
  SourceArgs source;
  std::string algorithm = "egt";
  std::string dgf = "dge";
  long iterations = 1000;
  std::optional<long> budget;
  std::uint64_t seed = 0;
  std::string out = "runs";
  long log_dense = 512;
  bool wall_time = false;
};

int RunSolve(const SolveArgs& a) {
  const int sources = !a.source.game.empty() + !a.source.game_file.empty() +
                      !a.source.chain_file.empty();
  if (sources != 1) {
    throw Error(ErrorKind::kInvalidParameter,
                "give exactly one of --game, --game-file, --chain-file");
  }
  if (a.iterations < 1) throw Error(ErrorKind::kInvalidParameter, "--iters must be >= 1");
  if (a.budget && *a.budget < 1) {
    throw Error(ErrorKind::kInvalidParameter, "--budget must be >= 1");
  }
  if (a.log_dense < 0) throw Error(ErrorKind::kInvalidParameter, "--log-dense must be >= 0");
  const auto alg = ParseAlgorithm(a.algorithm);
  if (!alg) throw Error(ErrorKind::kInvalidParameter, "unknown algorithm '" + a.algorithm + "'");
  const auto kind = ParseDgfKind(a.dgf);
  if (!kind || *kind == DgfKind::kDilatedEuclidean) {
    throw Error(ErrorKind::kInvalidParameter, "unknown dgf '" + a.dgf + "'");
  }

  std::optional<SaddlePointProblem> problem;
  if (!a.source.chain_file.empty()) {
    problem = ProblemFromChainFile(LoadChainFile(a.source.chain_file), *kind);
  } else {
    const GameInstance game = a.source.game.empty() ? LoadGame(a.source.game_file)
                                                    : Builtin(a.source.game, a.source.ranks);
    problem = ProblemFromGame(game, *kind);
  }

  ordered_json config;
  config["command"] = "solve";
  config["source"] = SourceJson(a.source);
  config["algorithm"] = std::string(AlgorithmName(*alg));
  config["dgf"] = std::string(DgfKindName(*kind));
  config["iterations"] = a.iterations;
  config["gradient_budget"] = a.budget ? ordered_json(*a.budget) : ordered_json(nullptr);
  config["seed"] = a.seed;
  config["log_dense_until"] = a.log_dense;
  config["wall_time"] = a.wall_time;
  const std::string config_text = config.dump(2) + "\n";

  SolveOptions options;
  options.algorithm = *alg;
  options.iterations = a.iterations;
  options.gradient_budget = a.budget;
  options.log_dense_until = a.log_dense;
  options.record_wall_time = a.wall_time;

  const auto start = std::chrono::steady_clock::now();
  const SolveResult result = Solve(*problem, options);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path base = fs::path(a.out) / (UtcStamp() + "-" + Fnv1a(config_text).substr(0, 12));
  fs::path dir = base;
  for (int k = 1; fs::exists(dir); ++k) dir = fs::path(base.string() + "-" + std::to_string(k));
  fs::create_directories(dir);
  WriteText(dir / "config.json", config_text);
  WriteText(dir / "log.csv", IterationLogCsv(result.log));

  ordered_json summary;
  summary["final_gap"] = result.final_gap;
  summary["gradient_computations"] = result.gradient_computations;
  summary["iterations"] = result.iterations;
  summary["bound_satisfied"] = result.bound_satisfied;
  const double bound = TheoreticalBound(*alg, std::max(1L, result.iterations),
                                        problem->opnorm, result.omega_x, result.omega_y);
  summary["final_bound"] = std::isnan(bound) ? ordered_json(nullptr) : ordered_json(bound);
  summary["omega_x"] = result.omega_x;
  summary["omega_y"] = result.omega_y;
  summary["opnorm"] = problem->opnorm;
  summary["fitted_mu"] =
      result.fitted_mu ? ordered_json(*result.fitted_mu) : ordered_json(nullptr);
  summary["elapsed_seconds"] = elapsed;
  WriteText(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << dir.string() << "\n"
            << "final_gap " << result.final_gap << " gradient_computations "
            << result.gradient_computations << " bound_satisfied "
            << (result.bound_satisfied ? "true" : "false") << "\n";
  return 0;
}

std::string WeightsCsv(const GameInstance& game) {
  std::ostringstream out;
  out << "player,decision_point,beta,gamma\n";
  const Treeplex* players[2] = {&game.treeplex_x, &game.treeplex_y};
  for (int p = 0; p < 2; ++p) {
    const Treeplex& t = *players[p];
    const DilatedWeights beta = ComputeBeta(t);
    const DilatedWeights gamma = ComputeGammaW(t).gamma;
    out << p + 1 << ",root," << Compact(beta.root) << ',' << Compact(gamma.root) << "\n";
    for (int j = 0; j < t.num_decision_points(); ++j) {
      out << p + 1 << ',' << t.decision_point(j).id << ',' << Compact(beta.decision_points[j])
          << ',' << Compact(gamma.decision_points[j]) << "\n";
    }
  }
  return out.str();
}

struct ValidateArgs {
  std::string source;
  std::optional<int> ranks;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string weights_csv;
};

int RunValidate(const ValidateArgs& a) {
  ValidationOptions options;
  options.seed = a.seed;
  options.threads = a.threads;
  ValidationReport report;
  if (a.source == "kuhn" || a.source == "leduc") {
    const GameInstance game = Builtin(a.source, a.ranks);
    if (!a.weights_csv.empty()) WriteText(a.weights_csv, WeightsCsv(game));
    report = ValidateGame(game, options);
  } else if (fs::exists(a.source)) {
    const std::string text = ReadText(a.source);
    bool is_chain = false;
    try {
      is_chain = nlohmann::json::parse(text).contains("blocks");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParseError, a.source + ": " + e.what());
    }
    if (is_chain) {
      const ChainFile file = ParseChainFile(text);
      if (auto err = ValidateScales(file.chain, a.seed)) throw *err;
      report = ValidateChain(file.chain, options);
    } else {
      const GameInstance game = ParseGame(text);
      if (!a.weights_csv.empty()) WriteText(a.weights_csv, WeightsCsv(game));
      report = ValidateGame(game, options);
    }
    report.source = a.source;
  } else {
    throw Error(ErrorKind::kUnknownGame, "unknown game or missing file '" + a.source + "'");
  }
  const std::string json = report.ToJson() + "\n";
  if (!a.out.empty()) WriteText(a.out, json);
  std::cout << json;
  for (const InvariantResult& r : report.results) {
    if (!r.passed) std::cerr << "FAIL " << r.name << " worst " << r.worst << "\n";
  }
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-form first-order solvers and DGF tools"};
  app.require_subcommand(1);

  std::string gen_name, gen_out;
  std::optional<int> gen_ranks;
  auto* gen = app.add_subcommand("generate", "write a builtin game and print its stats");
  gen->add_option("name", gen_name, "kuhn | leduc")->required();
  gen->add_option("--ranks", gen_ranks, "number of ranks for leduc");
  gen->add_option("--out", gen_out, "output path (default <game>.json)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "run a solver and write runs/<stamp>-<hash>/");
  AddSourceOptions(solve, solve_args.source);
  solve->add_option("--alg", solve_args.algorithm, "egt | mp | egt-as");
  solve->add_option("--dgf", solve_args.dgf, "dge | dilated-entropy");
  solve->add_option("--iters", solve_args.iterations, "iteration budget");
  solve->add_option("--budget", solve_args.budget, "gradient computation budget");
  solve->add_option("--seed", solve_args.seed, "seed recorded in the config");
  solve->add_option("--out", solve_args.out, "base directory for runs");
  solve->add_option("--log-dense", solve_args.log_dense,
                    "log every iteration up to this one, then powers of two");
  solve->add_flag("--wall-time", solve_args.wall_time, "record wall time in the CSV");

  ValidateArgs val_args;
  auto* val = app.add_subcommand("validate", "run the invariant suites");
  val->add_option("source", val_args.source, "kuhn | leduc | game or chain file")->required();
  val->add_option("--ranks", val_args.ranks, "number of ranks for leduc");
  val->add_option("--seed", val_args.seed, "sampling seed");
  val->add_option("--threads", val_args.threads, "worker threads (0: auto)");
  val->add_option("--out", val_args.out, "write the JSON report here");
  val->add_option("--weights-csv", val_args.weights_csv, "export beta/gamma per decision point");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return RunGenerate(gen_name, gen_ranks, gen_out);
    if (*solve) return RunSolve(solve_args);
    if (*val) return RunValidate(val_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
