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

#include "fogdist/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "fogdist/format.hpp"

namespace fogdist {

namespace {

// Runs fn(i) for i in [0, n). Each index writes only its own slot, so the
// result does not depend on the worker count.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += jobs) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  workers.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_header(std::ostream& out, const Provenance& p) {
  out << "# config_hash=" << p.config_hash << " master_seed=" << p.master_seed << '\n';
}

void write_stats_columns(std::ostream& out, const BoxplotStats& s) {
  out << format_double(s.min) << ',' << format_double(s.q1) << ',' << format_double(s.median) << ','
      << format_double(s.mean) << ',' << format_double(s.q3) << ',' << format_double(s.max);
}

ExperimentConfig cell_config(const ExperimentConfig& cfg, double lambda, const UtilityWeights& w) {
  ExperimentConfig cell = cfg;
  cell.pricing.lambda = lambda;
  cell.weights = w;
  cell.agent.weights = w;
  cell.validate();
  return cell;
}

}  // namespace

DistributionAgent make_agent(const ExperimentConfig& cfg) {
  AgentConfig agent_cfg = cfg.agent;
  agent_cfg.weights = cfg.weights;
  return DistributionAgent(agent_cfg, cfg.profile.n_modules(), derive_seed(cfg.master_seed, Stream::kAgentInit));
}

TrainingRun run_training(const ExperimentConfig& cfg) {
  TrainingRun run{{}, make_agent(cfg)};
  TrainingOptions options;
  options.episodes = cfg.episodes;
  options.deployments = cfg.deployments;
  options.pricing = cfg.pricing;
  options.environment = cfg.environment;
  options.master_seed = cfg.master_seed;
  run.learning_curve = train(cfg.profile, run.agent, options);
  return run;
}

FogEnvironment evaluation_environment(const ExperimentConfig& cfg, int index) {
  return FogEnvironment(cfg.profile, cfg.environment,
                        derive_seed(cfg.master_seed, Stream::kEvalExperiment, static_cast<std::uint64_t>(index)));
}

const ApproachResult* Evaluation::find(const std::string& name) const {
  for (const auto& a : approaches) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

ApproachResult evaluate_approach(const ExperimentConfig& cfg, const std::string& name, const Strategy& strategy,
                                 int jobs) {
  const int n = cfg.eval_experiments;
  const int n_actions = cfg.profile.n_modules() + 1;
  ApproachResult result;
  result.name = name;
  result.utilities.assign(static_cast<std::size_t>(n), 0.0);
  result.mean_costs.assign(static_cast<std::size_t>(n), 0.0);
  result.mean_latency_s.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<long>> k_counts(static_cast<std::size_t>(n), std::vector<long>(n_actions, 0));

  EpisodeOptions options;
  options.deployments = cfg.deployments;
  options.pricing = cfg.pricing;
  options.weights = cfg.weights;
  options.learn = false;

  const auto* agent_ref = std::get_if<std::reference_wrapper<DistributionAgent>>(&strategy);

  parallel_for(n, jobs, [&](int e) {
    FogEnvironment env = evaluation_environment(cfg, e);
    EpisodeResult episode;
    if (agent_ref != nullptr) {
      DistributionAgent greedy = agent_ref->get();
      greedy.freeze();
      episode = run_episode(env, std::ref(greedy), options);
    } else {
      episode = run_episode(env, strategy, options);
    }
    const auto idx = static_cast<std::size_t>(e);
    result.utilities[idx] = episode.reward;
    double cost = 0, latency = 0;
    for (const auto& step : episode.steps) {
      cost += step.cost;
      latency += step.outcome.t_seconds / static_cast<double>(step.outcome.requests);
      ++k_counts[idx][static_cast<std::size_t>(step.k)];
    }
    result.mean_costs[idx] = cost / static_cast<double>(episode.steps.size());
    result.mean_latency_s[idx] = latency / static_cast<double>(episode.steps.size());
  });

  result.k_counts.assign(static_cast<std::size_t>(n_actions), 0);
  for (const auto& counts : k_counts) {
    for (std::size_t k = 0; k < counts.size(); ++k) result.k_counts[k] += counts[k];
  }
  result.stats = boxplot(result.utilities);
  return result;
}

Evaluation run_evaluation(const ExperimentConfig& cfg, const DistributionAgent* agent, int jobs) {
  Evaluation evaluation;
  for (int k = 0; k <= cfg.profile.n_modules(); ++k) {
    evaluation.approaches.push_back(evaluate_approach(cfg, "S-" + std::to_string(k), StaticPlan{k}, jobs));
  }
  if (agent != nullptr) {
    DistributionAgent copy = *agent;
    evaluation.approaches.push_back(evaluate_approach(cfg, "context-aware", std::ref(copy), jobs));
  }
  return evaluation;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                                 const std::vector<UtilityWeights>& weights, bool train_agents, int jobs) {
  if (lambdas.empty() || weights.empty()) throw std::invalid_argument("sweep: grids must be non-empty");
  std::vector<SweepCell> cells;
  for (double lambda : lambdas) {
    for (const auto& w : weights) {
      const ExperimentConfig cell = cell_config(cfg, lambda, w);
      SweepCell out{lambda, w, {}};
      if (train_agents) {
        TrainingRun run = run_training(cell);
        out.evaluation = run_evaluation(cell, &run.agent, jobs);
      } else {
        out.evaluation = run_evaluation(cell, nullptr, jobs);
      }
      cells.push_back(std::move(out));
    }
  }
  return cells;
}

LatencySample measure_decision_latency(const DistributionAgent& agent, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("latency: need at least one sample");
  DistributionAgent greedy = agent;
  greedy.freeze();
  const Strategy strategy = std::ref(greedy);
  Rng rng(seed);
  const std::size_t dim = greedy.online().architecture().input_dim;
  StateVector state(dim);

  LatencySample out;
  out.samples_ms.reserve(static_cast<std::size_t>(n));
  long checksum = 0;
  for (int i = 0; i < n; ++i) {
    for (double& v : state) v = rng.uniform();
    const auto t0 = std::chrono::steady_clock::now();
    checksum += select_k(strategy, state, rng);
    const auto t1 = std::chrono::steady_clock::now();
    out.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  if (checksum < 0) throw std::logic_error("latency: negative action index");
  out.stats = boxplot(out.samples_ms);
  return out;
}

CalibrationReport calibrate(const ApplicationProfile& profile, const CalibrationTargets& targets) {
  const int n = profile.n_modules();
  if (targets.transmission_s.size() != static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("calibrate: targets cover " + std::to_string(targets.transmission_s.size()) +
                                " plans but profile '" + profile.name + "' has " + std::to_string(n + 1));
  }
  for (std::size_t m : targets.light_modules) {
    if (m >= static_cast<std::size_t>(n)) throw std::invalid_argument("calibrate: light module index out of range");
  }

  CalibrationReport report;
  for (int k = 0; k <= n; ++k) {
    FogEnvironment env(profile, EnvironmentConfig::unstressed(), 0);
    CalibrationRow row{k, env.execute_deployment(k).per_request};

    const double expected = targets.transmission_s[static_cast<std::size_t>(k)];
    const double got = row.per_request.network_s;
    const double rel = std::abs(got - expected) / expected;
    if (rel > targets.relative_tolerance) {
      std::ostringstream msg;
      msg << "k=" << k << " transmission " << got << " s vs " << expected << " s (" << std::setprecision(3)
          << 100.0 * rel << "% off)";
      report.failures.push_back(msg.str());
    }
    for (std::size_t m : targets.light_modules) {
      const double t = row.per_request.module_s[m];
      if (t < targets.light_module_min_s - 1e-12 || t > targets.light_module_max_s + 1e-12) {
        std::ostringstream msg;
        msg << "k=" << k << " module '" << profile.modules[m].name << "' takes " << t << " s, outside ["
            << targets.light_module_min_s << ", " << targets.light_module_max_s << "]";
        report.failures.push_back(msg.str());
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void print_calibration(std::ostream& out, const ApplicationProfile& profile, const CalibrationReport& report) {
  out << "per-request time breakdown, unstressed node, profile '" << profile.name << "' (seconds)\n";
  out << std::left << std::setw(4) << "k" << std::setw(14) << "transmission";
  for (const auto& m : profile.modules) out << std::setw(18) << m.name;
  out << "total\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& row : report.rows) {
    out << std::setw(4) << row.k << std::setw(14) << row.per_request.network_s;
    for (double t : row.per_request.module_s) out << std::setw(18) << t;
    out << row.per_request.total() << '\n';
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
  if (report.passed()) {
    out << "PASS\n";
  } else {
    for (const auto& f : report.failures) out << "FAIL: " << f << '\n';
  }
}

Provenance Provenance::of(const ExperimentConfig& cfg) { return {fogdist::config_hash(cfg), cfg.master_seed}; }

void write_learning_curve(const std::filesystem::path& path, const std::vector<double>& curve,
                          const Provenance& provenance) {
  auto out = open_output(path);
  write_header(out, provenance);
  out << "episode,reward\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out << (i + 1) << ',' << format_double(curve[i]) << '\n';
}

void write_utilities(const std::filesystem::path& dir, const Evaluation& evaluation, const Provenance& provenance) {
  for (const auto& a : evaluation.approaches) {
    auto out = open_output(dir / ("utilities_" + a.name + ".csv"));
    write_header(out, provenance);
    out << "experiment,utility\n";
    for (std::size_t e = 0; e < a.utilities.size(); ++e) out << e << ',' << format_double(a.utilities[e]) << '\n';
  }
}

void write_boxplots(const std::filesystem::path& path, const Evaluation& evaluation, const Provenance& provenance) {
  auto out = open_output(path);
  write_header(out, provenance);
  out << "approach,count,min,q1,median,mean,q3,max\n";
  for (const auto& a : evaluation.approaches) {
    out << a.name << ',' << a.stats.count << ',';
    write_stats_columns(out, a.stats);
    out << '\n';
  }
}

void write_summary(const std::filesystem::path& path, const Evaluation& evaluation, const Provenance& provenance) {
  auto out = open_output(path);
  write_header(out, provenance);
  const std::size_t n_actions = evaluation.approaches.empty() ? 0 : evaluation.approaches.front().k_counts.size();
  out << "approach,mean_cost,mean_latency_s";
  for (std::size_t k = 0; k < n_actions; ++k) out << ",share_k" << k;
  out << '\n';
  for (const auto& a : evaluation.approaches) {
    const double cost = std::accumulate(a.mean_costs.begin(), a.mean_costs.end(), 0.0) /
                        static_cast<double>(a.mean_costs.size());
    const double latency = std::accumulate(a.mean_latency_s.begin(), a.mean_latency_s.end(), 0.0) /
                           static_cast<double>(a.mean_latency_s.size());
    const double decisions = static_cast<double>(std::accumulate(a.k_counts.begin(), a.k_counts.end(), 0L));
    out << a.name << ',' << format_double(cost) << ',' << format_double(latency);
    for (long c : a.k_counts) out << ',' << format_double(static_cast<double>(c) / decisions);
    out << '\n';
  }
}

void write_latency(const std::filesystem::path& path, const BoxplotStats& stats, const Provenance& provenance) {
  auto out = open_output(path);
  write_header(out, provenance);
  out << "min,q1,median,mean,q3,max\n";
  write_stats_columns(out, stats);
  out << '\n';
}

void write_run_json(const std::filesystem::path& path, const std::string& command, const ExperimentConfig& cfg,
                    const nlohmann::json& extra) {
  nlohmann::json j = {{"tool", "fogdist"},
                      {"command", command},
                      {"config_hash", config_hash(cfg)},
                      {"master_seed", cfg.master_seed},
                      {"config", config_to_json(cfg)}};
  for (const auto& item : extra.items()) j[item.key()] = item.value();
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

TrainArtifacts cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  TrainingRun run = run_training(cfg);
  TrainArtifacts artifacts;
  artifacts.learning_curve = run.learning_curve;
  artifacts.curve_csv = out_dir / "learning_curve.csv";
  artifacts.checkpoint = out_dir / "agent.ckpt";
  write_learning_curve(artifacts.curve_csv, run.learning_curve, Provenance::of(cfg));
  {
    auto out = open_output(artifacts.checkpoint);
    run.agent.save(out);
  }
  write_run_json(out_dir / "run.json", "train", cfg,
                 {{"episodes", run.learning_curve.size()},
                  {"final_epsilon", run.agent.schedule().epsilon()},
                  {"outputs", {"learning_curve.csv", "agent.ckpt"}}});
  return artifacts;
}

Evaluation cmd_evaluate(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& checkpoint,
                        const std::filesystem::path& out_dir, int jobs) {
  std::optional<DistributionAgent> agent;
  if (checkpoint) {
    agent = load_checkpoint(*checkpoint);
    if (agent->n_actions() != cfg.profile.n_modules() + 1) {
      throw ConfigError("checkpoint", "agent was trained for a different number of modules");
    }
  }
  Evaluation evaluation = run_evaluation(cfg, agent ? &*agent : nullptr, jobs);
  const Provenance provenance = Provenance::of(cfg);
  write_utilities(out_dir, evaluation, provenance);
  write_boxplots(out_dir / "boxplots.csv", evaluation, provenance);
  write_summary(out_dir / "summary.csv", evaluation, provenance);
  nlohmann::json approaches = nlohmann::json::array();
  for (const auto& a : evaluation.approaches) approaches.push_back(a.name);
  write_run_json(out_dir / "run.json", "evaluate", cfg,
                 {{"approaches", approaches}, {"checkpoint", checkpoint ? checkpoint->filename().string() : ""}});
  return evaluation;
}

std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                                 const std::vector<UtilityWeights>& weights, bool train_agents,
                                 const std::filesystem::path& out_dir, int jobs) {
  std::vector<SweepCell> cells = run_sweep(cfg, lambdas, weights, train_agents, jobs);
  const Provenance provenance = Provenance::of(cfg);

  auto box = open_output(out_dir / "sweep_boxplots.csv");
  write_header(box, provenance);
  box << "cell,lambda,alpha,beta,approach,count,min,q1,median,mean,q3,max\n";
  auto cost = open_output(out_dir / "cost_vs_lambda.csv");
  write_header(cost, provenance);
  cost << "cell,lambda,alpha,beta,approach,mean_cost\n";

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    const std::string prefix = std::to_string(c) + ',' + format_double(cell.lambda) + ',' +
                               format_double(cell.weights.alpha) + ',' + format_double(cell.weights.beta) + ',';
    for (const auto& a : cell.evaluation.approaches) {
      box << prefix << a.name << ',' << a.stats.count << ',';
      write_stats_columns(box, a.stats);
      box << '\n';
      const double mean_cost = std::accumulate(a.mean_costs.begin(), a.mean_costs.end(), 0.0) /
                               static_cast<double>(a.mean_costs.size());
      cost << prefix << a.name << ',' << format_double(mean_cost) << '\n';
    }
    write_utilities(out_dir / ("cell_" + std::to_string(c)), cell.evaluation, provenance);
  }

  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    grid.push_back({{"cell", c},
                    {"lambda", cells[c].lambda},
                    {"alpha", cells[c].weights.alpha},
                    {"beta", cells[c].weights.beta}});
  }
  write_run_json(out_dir / "run.json", "sweep", cfg, {{"cells", grid}, {"train_agents", train_agents}});
  return cells;
}

LatencySample cmd_latency(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint, int n,
                          const std::filesystem::path& out_dir) {
  const DistributionAgent agent = load_checkpoint(checkpoint);
  LatencySample sample = measure_decision_latency(agent, n, derive_seed(cfg.master_seed, Stream::kLatencyProbe));
  write_latency(out_dir / "latency.csv", sample.stats, Provenance::of(cfg));
  write_run_json(out_dir / "run.json", "latency", cfg, {{"calls", n}, {"checkpoint", checkpoint.filename().string()}});
  return sample;
}

DistributionAgent load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open checkpoint");
  return DistributionAgent::load(in);
}

}  // namespace fogdist
