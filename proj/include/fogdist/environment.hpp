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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "fogdist/model.hpp"
#include "fogdist/profile.hpp"
#include "fogdist/random.hpp"

namespace fogdist {

/*
 * What the Distribution Manager sees of the Fog node before a deployment.
 * Counters (io_*, net_*) only grow within one experiment; delays are in ms.
 */
struct FogNodeState {
  static constexpr std::size_t kFactors = 19;

  double cpu_util = 0;
  double cpu_count = 0;
  double cpu_freq = 0;  // MHz
  double mem_total = 0;  // GB
  double mem_used = 0;
  double swap_total = 0;
  double swap_used = 0;
  double disk_total = 0;
  double disk_used = 0;
  double io_reads = 0;
  double io_writes = 0;
  double io_read_bytes = 0;
  double io_write_bytes = 0;
  double net_bytes_sent = 0;
  double net_bytes_recv = 0;
  double net_pkts_sent = 0;
  double net_pkts_recv = 0;
  double delay_fog_cloud = 0;
  double delay_dev_cloud = 0;

  std::array<double, kFactors> to_array() const;
  static const std::array<std::string_view, kFactors>& factor_names();
};

using StateVector = std::vector<double>;

// Fixed [lo, hi] per factor, in to_array() order. Values outside are clamped.
struct StateBounds {
  std::array<std::pair<double, double>, FogNodeState::kFactors> range;

  static StateBounds defaults();
};

StateVector normalise(const FogNodeState& state, const StateBounds& bounds);

/*
 * Background CPU/memory stress of the Fog node: `capacity_units` units of one
 * core plus one memory slice; a uniform draw from {0, ..., capacity_units-1}
 * of them are busy, redrawn at every multiple of `resample_interval` seconds
 * of simulated time. The load in interval i is the i-th draw of the stream, so
 * the trajectory depends only on the seed and the elapsed time.
 */
class StressProcess {
 public:
  StressProcess(std::uint64_t seed, int capacity_units = 8, double resample_interval = 10.0);

  // No stress at all, or a constant load.
  static StressProcess fixed(int load, int capacity_units = 8);

  int current_load() const { return current_load_; }
  int capacity_units() const { return capacity_units_; }
  double resample_interval() const { return resample_interval_; }
  double elapsed() const { return elapsed_; }
  std::uint64_t seed() const { return seed_; }

  friend StressProcess advance_stress(StressProcess p, double dt);

 private:
  StressProcess() = default;

  std::uint64_t seed_ = 0;
  int capacity_units_ = 8;
  double resample_interval_ = 10.0;
  bool random_ = false;
  int current_load_ = 0;
  double elapsed_ = 0.0;
  long interval_index_ = 0;
  Rng rng_;
};

StressProcess advance_stress(StressProcess p, double dt);

// base_s * max(1, demand / max(available, 0.25)).
double contended_time(double base_s, double demand_units, double available_units);

struct NodeSpec {
  int capacity_units = 8;
  double unit_mem_gb = 0.25;
  double mem_total_gb = 2.0;
  double swap_total_gb = 1.0;
  double disk_total_gb = 32.0;
  double disk_base_used_gb = 5.6;
  double cpu_freq_idle_mhz = 1400.0;
  double cpu_freq_busy_mhz = 2000.0;
};

struct EnvironmentConfig {
  NodeSpec node;
  bool stress_enabled = true;
  std::optional<int> fixed_load;  // overrides the random stress when set
  double stress_interval_s = 10.0;
  // Link speed factor drawn uniformly from [1 - jitter, 1 + jitter] per
  // interval, independently for the Fog->Cloud and device->Cloud paths.
  double link_jitter = 0.1;
  double link_interval_s = 10.0;
  StateBounds bounds = StateBounds::defaults();

  // Stress off and no link jitter: the conditions of the per-frame breakdown.
  static EnvironmentConfig unstressed();
};

// Mean per-request time split, seconds.
struct LatencyBreakdown {
  double network_s = 0.0;
  std::vector<double> module_s;  // per module, wherever it ran

  double total() const;
};

struct DeploymentRecord {
  DeploymentOutcome outcome;
  LatencyBreakdown per_request;
};

/*
 * One Device-Fog-Cloud system over one experiment. Requests are processed
 * sequentially; every request advances the simulated clock, and with it the
 * stress and link processes, by its own latency.
 */
class FogEnvironment {
 public:
  FogEnvironment(ApplicationProfile profile, EnvironmentConfig config, std::uint64_t seed);

  FogNodeState observe_state() const;
  StateVector observe_normalised() const { return normalise(observe_state(), config_.bounds); }

  // Deploys modules [0, k) on the Fog node and the rest on the Cloud VM, then
  // serves requests_per_deployment requests. Throws std::domain_error when k
  // lies outside [0, N].
  DeploymentRecord execute_deployment(int k);

  double now() const { return now_; }
  const StressProcess& stress() const { return stress_; }
  int deployed_k() const { return deployed_k_; }
  const ApplicationProfile& profile() const { return profile_; }
  const EnvironmentConfig& config() const { return config_; }

  // Current speed factors of the Fog->Cloud and device->Cloud links.
  double fog_cloud_factor() const { return fog_cloud_factor_; }
  double dev_cloud_factor() const { return dev_cloud_factor_; }

 private:
  void advance(double dt);
  void advance_links(double dt);
  void draw_link_factors();
  void add_background_traffic(double dt);

  ApplicationProfile profile_;
  EnvironmentConfig config_;
  StressProcess stress_;
  Rng link_rng_;
  Rng counter_rng_;
  double now_ = 0.0;
  long link_interval_index_ = 0;
  double fog_cloud_factor_ = 1.0;
  double dev_cloud_factor_ = 1.0;
  int deployed_k_ = 0;

  double io_reads_ = 0;
  double io_writes_ = 0;
  double io_read_bytes_ = 0;
  double io_write_bytes_ = 0;
  double net_bytes_sent_ = 0;
  double net_bytes_recv_ = 0;
  double net_pkts_sent_ = 0;
  double net_pkts_recv_ = 0;
};

}  // namespace fogdist
