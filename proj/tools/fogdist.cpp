// Copyright 2026 The fogdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fogdist command line: train | evaluate | sweep | calibrate | latency.
// Exit codes: 0 success, 1 validation error, 2 calibration failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fogdist/errors.hpp"
#include "fogdist/experiment.hpp"
#include "fogdist/format.hpp"

namespace {

using namespace fogdist;

struct CommonFlags {
  std::string config;
  std::string profile = "fd";
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string out_dir = "out";
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config (JSON)");
  cmd->add_option("--profile", f.profile, "profile name (fd, ipokemon) or path, when no --config is given");
  cmd->add_option("--seed", f.seed, "master seed override");
  cmd->add_option("--episodes", f.episodes, "training episodes override");
  cmd->add_option("--lambda", f.lambda, "fog/cloud price ratio override");
  cmd->add_option("--alpha", f.alpha, "QoS weight override");
  cmd->add_option("--beta", f.beta, "cost weight override");
  cmd->add_option("--out-dir", f.out_dir, "output directory");
  cmd->add_option("--jobs", f.jobs, "evaluation worker threads (0 = hardware)");
}

ExperimentConfig resolve_config(const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? default_config(f.profile) : load_config(f.config);
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.episodes) cfg.episodes = *f.episodes;
  if (f.lambda) cfg.pricing.lambda = *f.lambda;
  if (f.alpha) cfg.weights.alpha = *f.alpha;
  if (f.beta) cfg.weights.beta = *f.beta;
  cfg.agent.weights = cfg.weights;
  cfg.validate();
  return cfg;
}

// "a:b,a:b" -> weight pairs.
std::vector<UtilityWeights> parse_weight_grid(const std::string& text) {
  std::vector<UtilityWeights> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("--weights", "expected alpha:beta, got '" + item + "'");
    UtilityWeights w;
    try {
      w.alpha = std::stod(item.substr(0, colon));
      w.beta = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("--weights", "not a number in '" + item + "'");
    }
    out.push_back(w);
  }
  if (out.empty()) throw ConfigError("--weights", "empty grid");
  return out;
}

void print_evaluation(const Evaluation& evaluation) {
  std::cout << "approach        median          q1              q3\n";
  for (const auto& a : evaluation.approaches) {
    std::cout << a.name << '\t' << format_double(a.stats.median) << '\t' << format_double(a.stats.q1) << '\t'
              << format_double(a.stats.q3) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fogdist: context-aware Fog/Cloud application distribution"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, sweep_f, cal_f, lat_f;
  std::string eval_checkpoint, lat_checkpoint;
  std::vector<double> lambdas = {0.001, 0.01, 0.1, 1.0};
  std::string weight_grid = "-1:-1";
  bool sweep_train = false;
  int lat_n = 10000;

  auto* train_cmd = app.add_subcommand("train", "train a context-aware agent");
  add_common(train_cmd, train_f);

  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate static plans and an optional checkpoint");
  add_common(eval_cmd, eval_f);
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "trained agent checkpoint");

  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a lambda x weights grid");
  add_common(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--lambdas", lambdas, "comma-separated lambda grid")->delimiter(',');
  sweep_cmd->add_option("--weights", weight_grid, "comma-separated alpha:beta grid");
  sweep_cmd->add_flag("--train", sweep_train, "train a context-aware agent per cell");

  auto* cal_cmd = app.add_subcommand("calibrate", "check the unstressed latency breakdown");
  add_common(cal_cmd, cal_f);

  auto* lat_cmd = app.add_subcommand("latency", "time greedy decisions of a checkpoint");
  add_common(lat_cmd, lat_f);
  lat_cmd->add_option("--checkpoint", lat_checkpoint, "trained agent checkpoint")->required();
  lat_cmd->add_option("--n", lat_n, "number of timed calls");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) {
      const ExperimentConfig cfg = resolve_config(train_f);
      const TrainArtifacts a = cmd_train(cfg, train_f.out_dir);
      std::cout << "trained " << a.learning_curve.size() << " episodes; wrote " << a.curve_csv.string() << " and "
                << a.checkpoint.string() << '\n';
    } else if (*eval_cmd) {
      const ExperimentConfig cfg = resolve_config(eval_f);
      std::optional<std::filesystem::path> ckpt;
      if (!eval_checkpoint.empty()) ckpt = eval_checkpoint;
      print_evaluation(cmd_evaluate(cfg, ckpt, eval_f.out_dir, eval_f.jobs));
    } else if (*sweep_cmd) {
      const ExperimentConfig cfg = resolve_config(sweep_f);
      const auto cells = cmd_sweep(cfg, lambdas, parse_weight_grid(weight_grid), sweep_train, sweep_f.out_dir,
                                   sweep_f.jobs);
      std::cout << "evaluated " << cells.size() << " cells into " << sweep_f.out_dir << '\n';
    } else if (*cal_cmd) {
      const ExperimentConfig cfg = resolve_config(cal_f);
      const CalibrationReport report = calibrate(cfg.profile);
      print_calibration(std::cout, cfg.profile, report);
      if (!report.passed()) return 2;
    } else if (*lat_cmd) {
      if (lat_n < 1) throw ConfigError("--n", "must be >= 1");
      const ExperimentConfig cfg = resolve_config(lat_f);
      const LatencySample s = cmd_latency(cfg, lat_checkpoint, lat_n, lat_f.out_dir);
      std::cout << "min,q1,median,mean,q3,max (ms)\n"
                << format_double(s.stats.min) << ',' << format_double(s.stats.q1) << ','
                << format_double(s.stats.median) << ',' << format_double(s.stats.mean) << ','
                << format_double(s.stats.q3) << ',' << format_double(s.stats.max) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
