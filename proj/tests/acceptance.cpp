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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits 2 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fogdist/experiment.hpp"
#include "fogdist/format.hpp"
#include "oracles.hpp"

using namespace fogdist;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Trained once, shared by the dominance and latency criteria.
const TrainingRun& hybrid_agent() {
  static const TrainingRun run = run_training(default_config("fd"));
  return run;
}

Verdict cost_model() {
  const PricingModel p;
  struct Case {
    double got, want;
  };
  const ResourceUsage u{1.0, 0.25, 0.0};
  const ResourceUsage big{6.0, 1.5, 0.7};
  const double t = seconds_to_hours(46.0);
  // Hand arithmetic with the default price table.
  const double fog_rate = 0.01 * (0.04073 * 6.0 + 0.005458 * 1.5 + 0.000032 * 0.7);
  const std::vector<Case> cases = {
      {cloud_cost(p, 1.0), 0.0132},
      {cloud_cost(p, 2.0), 0.0264},
      {cloud_cost(p, 0.0), 0.0},
      {fog_cost(p, u, 1.0), 0.000420945},
      {fog_cost(p, {0, 0, 0}, 1.0), 0.0},
      {deployment_cost(0, 3, p, big, t), 0.0132 * 46.0 / 3600.0},
      {deployment_cost(3, 3, p, big, t), fog_rate * 46.0 / 3600.0},
      {deployment_cost(1, 3, p, big, t), (0.0132 + fog_rate) * 46.0 / 3600.0},
      {deployment_cost(2, 3, p, {0, 0, 0}, t), 0.0132 * 46.0 / 3600.0},
  };
  double worst = 0;
  for (const auto& c : cases) worst = std::max(worst, rel_err(c.got, c.want));
  PricingModel hi = p, lo = p;
  hi.lambda = 1.0;
  lo.lambda = 0.001;
  worst = std::max(worst, rel_err(fog_cost(hi, big, t) / fog_cost(lo, big, t), 1000.0));
  return {worst < 1e-12, "max relative error " + format_double(worst) + " over " +
                             std::to_string(cases.size() + 1) + " cases (< 1e-12)"};
}

Verdict gradients() {
  const auto check = oracle::check_gradients(NetworkArchitecture{5, 2, 8, 4}, 100, 1e-5, 7);
  return {check.max_relative_error < 1e-4, "max relative error " + format_double(check.max_relative_error) +
                                               " over " + std::to_string(check.parameters_checked) +
                                               " parameters in 100 cases (< 1e-4)"};
}

Verdict calibration() {
  const auto fd = builtin_profiles().first;
  const CalibrationReport report = calibrate(fd);
  std::ostringstream detail;
  detail << "transmission";
  for (const auto& row : report.rows) detail << ' ' << format_double(row.per_request.network_s);
  detail << " s; grey " << format_double(report.rows[0].per_request.module_s[0]) << " s, motion "
         << format_double(report.rows[0].per_request.module_s[1]) << " s";
  for (const auto& f : report.failures) detail << "; " << f;
  return {report.passed(), detail.str()};
}

Verdict epsilon_schedule() {
  EpsilonSchedule s;
  int mismatches = 0;
  int first_floor = -1;
  for (int t = 0; t <= 1000; ++t) {
    if (s.epsilon() != std::max(0.01, std::pow(0.99, static_cast<double>(t)))) ++mismatches;
    if (first_floor < 0 && s.epsilon() == 0.01) first_floor = t;
    s = decay_epsilon(s);
  }
  return {mismatches == 0 && first_floor == 459, std::to_string(mismatches) +
                                                     " mismatches over 1000 decays; floor first reached after " +
                                                     std::to_string(first_floor) + " decays"};
}

Verdict learning_improvement() {
  ExperimentConfig cfg = default_config("fd");
  cfg.episodes = 300;
  const TrainingRun run = run_training(cfg);
  const auto& c = run.learning_curve;
  const double first = mean_of({c.begin(), c.begin() + 30});
  const double last = mean_of({c.end() - 30, c.end()});
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  const double range = *hi - *lo;
  const double gain = last - first;
  return {gain > 0 && gain >= 0.1 * range, "first-30 mean " + format_double(first) + ", last-30 mean " +
                                               format_double(last) + ", gain " + format_double(gain) +
                                               " vs 10% of range " + format_double(0.1 * range)};
}

Verdict dominance() {
  const ExperimentConfig cfg = default_config("fd");
  const Evaluation ev = run_evaluation(cfg, &hybrid_agent().agent);
  const ApproachResult* best = nullptr;
  for (const auto& a : ev.approaches) {
    if (a.name == "context-aware") continue;
    if (best == nullptr || a.stats.median > best->stats.median) best = &a;
  }
  const ApproachResult& ca = *ev.find("context-aware");
  const double bar = best->stats.median - 0.05 * best->stats.iqr();
  return {ca.stats.median >= bar, "context-aware median " + format_double(ca.stats.median) + " vs " + best->name +
                                      " median " + format_double(best->stats.median) + " - 5% IQR = " +
                                      format_double(bar)};
}

// Per-deployment cost bounds under any load and link state: Cloud-only at
// its slowest against every Fog plan at its fastest.
bool cloud_only_always_cheapest(const ExperimentConfig& cfg) {
  const ApplicationProfile& p = cfg.profile;
  const double j = cfg.environment.link_jitter;
  const double r = static_cast<double>(p.requests_per_deployment);
  double cloud_compute = 0;
  for (const auto& m : p.modules) cloud_compute += m.compute_s;
  const double t0 = r * (cloud_compute + transmission_time(p.raw_request_data, p) * p.device_link_factor * (1 + j));
  const double c0 = deployment_cost(0, p.n_modules(), cfg.pricing, {}, seconds_to_hours(t0));
  for (int k = 1; k <= p.n_modules(); ++k) {
    ResourceUsage u;
    double compute = 0;
    for (int i = 0; i < p.n_modules(); ++i) {
      const auto& m = p.modules[static_cast<std::size_t>(i)];
      compute += i < k ? m.compute_s + m.fog_extra_s : m.compute_s;
      if (i < k) u += m.demand;
    }
    const double tk = r * (compute + transmission_time(p.surviving_data(k), p) * (1 - j));
    if (deployment_cost(k, p.n_modules(), cfg.pricing, u, seconds_to_hours(tk)) <= c0) return false;
  }
  return true;
}

Verdict degenerate_lambda() {
  ExperimentConfig cfg = default_config("fd");
  cfg.pricing.lambda = 1.0;
  cfg.weights = {0.0, -1.0};
  cfg.agent.weights = cfg.weights;
  // Cost-only utilities are of order 1e-4 per deployment.
  cfg.agent.reward_scale = 1000.0;
  const bool oracle_ok = cloud_only_always_cheapest(cfg);

  TrainingRun run = run_training(cfg);
  const ApproachResult ca = evaluate_approach(cfg, "context-aware", std::ref(run.agent));
  const long decisions = std::accumulate(ca.k_counts.begin(), ca.k_counts.end(), 0L);
  const double share = static_cast<double>(ca.k_counts[0]) / static_cast<double>(decisions);
  return {oracle_ok && decisions == 2000 && share >= 0.95,
          std::string("k=0 cheapest in every state: ") + (oracle_ok ? "yes" : "no") + "; k=0 chosen in " +
              std::to_string(ca.k_counts[0]) + "/" + std::to_string(decisions) + " decisions (>= 95%)"};
}

Verdict lambda_monotonicity() {
  const ExperimentConfig cfg = default_config("fd");
  const std::vector<double> lambdas = {0.001, 0.01, 0.1, 1.0};
  const auto cells = run_sweep(cfg, lambdas, {cfg.weights}, false);
  std::vector<double> fog_only;
  for (const auto& cell : cells) fog_only.push_back(mean_of(cell.evaluation.find("S-3")->mean_costs));
  bool increasing = true;
  for (std::size_t i = 1; i < fog_only.size(); ++i) increasing = increasing && fog_only[i] > fog_only[i - 1];
  const Evaluation& cheap = cells[0].evaluation;
  const double cloud = mean_of(cheap.find("S-0")->mean_costs);
  bool undercut = true;
  for (const char* name : {"S-1", "S-2", "S-3"}) undercut = undercut && mean_of(cheap.find(name)->mean_costs) < cloud;
  std::string detail = "S-3 mean cost";
  for (double c : fog_only) detail += ' ' + format_double(c);
  detail += std::string("; fog plans below S-0 at 0.001: ") + (undercut ? "yes" : "no");
  return {increasing && undercut, detail};
}

Verdict decision_overhead() {
  const LatencySample s = measure_decision_latency(hybrid_agent().agent, 10000, 9);
  const auto& b = s.stats;
  return {b.max < 248.0, "ms min,q1,median,mean,q3,max = " + format_double(b.min) + "," + format_double(b.q1) +
                             "," + format_double(b.median) + "," + format_double(b.mean) + "," +
                             format_double(b.q3) + "," + format_double(b.max) + " (max < 248)"};
}

Verdict determinism() {
  ExperimentConfig cfg = default_config("fd");
  cfg.episodes = 60;
  const fs::path root = fs::temp_directory_path() / "fogdist_acceptance_determinism";
  std::vector<fs::path> dirs = {root / "a", root / "b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const TrainArtifacts t = cmd_train(cfg, d);
    cmd_evaluate(cfg, t.checkpoint, d);
  }
  int compared = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename())) ++differing;
  }
  fs::remove_all(root);
  return {compared >= 7 && differing == 0,
          std::to_string(compared) + " CSV files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"cost-model exactness", cost_model},
      {"gradient correctness", gradients},
      {"calibration", calibration},
      {"epsilon schedule", epsilon_schedule},
      {"learning improvement", learning_improvement},
      {"dominance property", dominance},
      {"degenerate-lambda behaviour", degenerate_lambda},
      {"lambda monotonicity", lambda_monotonicity},
      {"decision overhead", decision_overhead},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 2;
}
