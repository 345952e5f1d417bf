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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fogdist/agent.hpp"
#include "fogdist/config.hpp"
#include "fogdist/statistics.hpp"

namespace fogdist {

// ---------------------------------------------------------------------------
// In-memory experiment drivers
// ---------------------------------------------------------------------------

DistributionAgent make_agent(const ExperimentConfig& cfg);

struct TrainingRun {
  std::vector<double> learning_curve;
  DistributionAgent agent;
};

// Trains a context-aware agent for cfg.episodes episodes.
TrainingRun run_training(const ExperimentConfig& cfg);

// Environment of evaluation experiment `index`. Every approach evaluated
// under the same config gets the same environment for the same index,
// hence the same stress and link trajectories.
FogEnvironment evaluation_environment(const ExperimentConfig& cfg, int index);

struct ApproachResult {
  std::string name;                 // "S-<k>" or "context-aware"
  std::vector<double> utilities;    // one per experiment
  std::vector<double> mean_costs;   // mean deployment cost per experiment
  std::vector<double> mean_latency_s;  // mean seconds per request per experiment
  std::vector<long> k_counts;       // decisions per k over all experiments
  BoxplotStats stats;
};

struct Evaluation {
  std::vector<ApproachResult> approaches;

  const ApproachResult* find(const std::string& name) const;
};

// Runs cfg.eval_experiments experiments of cfg.deployments deployments for
// a single approach. A context-aware agent is copied and frozen (greedy).
ApproachResult evaluate_approach(const ExperimentConfig& cfg, const std::string& name, const Strategy& strategy,
                                 int jobs = 0);

// S-0 .. S-N, plus the greedy context-aware policy when `agent` is given.
Evaluation run_evaluation(const ExperimentConfig& cfg, const DistributionAgent* agent, int jobs = 0);

struct SweepCell {
  double lambda = 0;
  UtilityWeights weights;
  Evaluation evaluation;
};

// Cross product of lambda x weights. With train_agents, each cell trains its
// own context-aware agent before evaluating.
std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                                 const std::vector<UtilityWeights>& weights, bool train_agents, int jobs = 0);

struct LatencySample {
  std::vector<double> samples_ms;
  BoxplotStats stats;
};

// Wall-clock time of greedy select_k over n random normalised states.
LatencySample measure_decision_latency(const DistributionAgent& agent, int n, std::uint64_t seed);

struct CalibrationTargets {
  std::vector<double> transmission_s = {2.28, 0.77, 0.52, 0.11};  // per k
  double relative_tolerance = 0.02;
  double light_module_min_s = 0.003;
  double light_module_max_s = 0.004;
  std::vector<std::size_t> light_modules = {0, 1};
};

struct CalibrationRow {
  int k = 0;
  LatencyBreakdown per_request;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

// Unstressed, jitter-free per-k breakdown compared against the targets.
// Throws std::invalid_argument if the profile's N does not match them.
CalibrationReport calibrate(const ApplicationProfile& profile, const CalibrationTargets& targets = {});

void print_calibration(std::ostream& out, const ApplicationProfile& profile, const CalibrationReport& report);

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

// Every CSV starts with "# config_hash=<hex> master_seed=<n>".
struct Provenance {
  std::string config_hash;
  std::uint64_t master_seed = 0;

  static Provenance of(const ExperimentConfig& cfg);
};

void write_learning_curve(const std::filesystem::path& path, const std::vector<double>& curve,
                          const Provenance& provenance);
void write_utilities(const std::filesystem::path& dir, const Evaluation& evaluation, const Provenance& provenance);
void write_boxplots(const std::filesystem::path& path, const Evaluation& evaluation, const Provenance& provenance);
void write_summary(const std::filesystem::path& path, const Evaluation& evaluation, const Provenance& provenance);
void write_latency(const std::filesystem::path& path, const BoxplotStats& stats, const Provenance& provenance);
void write_run_json(const std::filesystem::path& path, const std::string& command, const ExperimentConfig& cfg,
                    const nlohmann::json& extra = nlohmann::json::object());

// ---------------------------------------------------------------------------
// Subcommands, as invoked by the CLI
// ---------------------------------------------------------------------------

struct TrainArtifacts {
  std::vector<double> learning_curve;
  std::filesystem::path curve_csv;
  std::filesystem::path checkpoint;
};

TrainArtifacts cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

Evaluation cmd_evaluate(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& checkpoint,
                        const std::filesystem::path& out_dir, int jobs = 0);

std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                                 const std::vector<UtilityWeights>& weights, bool train_agents,
                                 const std::filesystem::path& out_dir, int jobs = 0);

LatencySample cmd_latency(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint, int n,
                          const std::filesystem::path& out_dir);

DistributionAgent load_checkpoint(const std::filesystem::path& path);

}  // namespace fogdist
