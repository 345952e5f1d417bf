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

#include "fogdist/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fogdist {

namespace {

constexpr double kAvailabilityFloor = 0.25;
constexpr double kPacketPayloadBytes = 1448.0;

// Per Fog-hosted module, per request.
constexpr double kModuleReads = 2.0;
constexpr double kModuleWrites = 1.0;
constexpr double kModuleReadBytes = 16.0 * 1024;
constexpr double kModuleWriteBytes = 4.0 * 1024;

// Background activity per second of simulated time, before noise.
constexpr double kBackgroundReads = 8.0;
constexpr double kBackgroundWrites = 15.0;
constexpr double kBackgroundReadBytes = 64.0 * 1024;
constexpr double kBackgroundWriteBytes = 128.0 * 1024;
constexpr double kBackgroundNetBytes = 500.0;

double packets_for(double bytes) { return bytes > 0 ? std::ceil(bytes / kPacketPayloadBytes) : 0.0; }

long interval_of(double t, double interval) { return static_cast<long>(std::floor(t / interval)); }

}  // namespace

std::array<double, FogNodeState::kFactors> FogNodeState::to_array() const {
  return {cpu_util,       cpu_count,      cpu_freq,       mem_total,      mem_used,
          swap_total,     swap_used,      disk_total,     disk_used,      io_reads,
          io_writes,      io_read_bytes,  io_write_bytes, net_bytes_sent, net_bytes_recv,
          net_pkts_sent,  net_pkts_recv,  delay_fog_cloud, delay_dev_cloud};
}

const std::array<std::string_view, FogNodeState::kFactors>& FogNodeState::factor_names() {
  static const std::array<std::string_view, kFactors> names = {
      "cpu_util",       "cpu_count",      "cpu_freq",       "mem_total",      "mem_used",
      "swap_total",     "swap_used",      "disk_total",     "disk_used",      "io_reads",
      "io_writes",      "io_read_bytes",  "io_write_bytes", "net_bytes_sent", "net_bytes_recv",
      "net_pkts_sent",  "net_pkts_recv",  "delay_fog_cloud", "delay_dev_cloud"};
  return names;
}

StateBounds StateBounds::defaults() {
  return {{{
      {0.0, 1.0},     // cpu_util
      {0.0, 16.0},    // cpu_count
      {0.0, 2500.0},  // cpu_freq
      {0.0, 4.0},     // mem_total
      {0.0, 4.0},     // mem_used
      {0.0, 2.0},     // swap_total
      {0.0, 2.0},     // swap_used
      {0.0, 64.0},    // disk_total
      {0.0, 64.0},    // disk_used
      {0.0, 2.0e5},   // io_reads
      {0.0, 2.0e5},   // io_writes
      {0.0, 2.0e9},   // io_read_bytes
      {0.0, 2.0e9},   // io_write_bytes
      {0.0, 1.0e9},   // net_bytes_sent
      {0.0, 1.0e9},   // net_bytes_recv
      {0.0, 1.0e6},   // net_pkts_sent
      {0.0, 1.0e6},   // net_pkts_recv
      {0.0, 500.0},   // delay_fog_cloud
      {0.0, 500.0},   // delay_dev_cloud
  }}};
}

StateVector normalise(const FogNodeState& state, const StateBounds& bounds) {
  const auto raw = state.to_array();
  StateVector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto [lo, hi] = bounds.range[i];
    const double span = hi - lo;
    out[i] = span > 0 ? std::clamp((raw[i] - lo) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

StressProcess::StressProcess(std::uint64_t seed, int capacity_units, double resample_interval)
    : seed_(seed),
      capacity_units_(capacity_units),
      resample_interval_(resample_interval),
      random_(true),
      rng_(seed) {
  if (capacity_units < 1) throw std::invalid_argument("stress: capacity must be >= 1");
  if (!(resample_interval > 0)) throw std::invalid_argument("stress: resample interval must be > 0");
  current_load_ = static_cast<int>(rng_.index(static_cast<std::size_t>(capacity_units_)));
}

StressProcess StressProcess::fixed(int load, int capacity_units) {
  if (load < 0 || load >= capacity_units) throw std::invalid_argument("stress: fixed load out of range");
  StressProcess p;
  p.capacity_units_ = capacity_units;
  p.current_load_ = load;
  return p;
}

StressProcess advance_stress(StressProcess p, double dt) {
  if (dt <= 0) return p;
  p.elapsed_ += dt;
  if (!p.random_) return p;
  const long target = interval_of(p.elapsed_, p.resample_interval_);
  for (; p.interval_index_ < target; ++p.interval_index_) {
    p.current_load_ = static_cast<int>(p.rng_.index(static_cast<std::size_t>(p.capacity_units_)));
  }
  return p;
}

double contended_time(double base_s, double demand_units, double available_units) {
  const double available = std::max(available_units, kAvailabilityFloor);
  return base_s * std::max(1.0, demand_units / available);
}

EnvironmentConfig EnvironmentConfig::unstressed() {
  EnvironmentConfig cfg;
  cfg.stress_enabled = false;
  cfg.link_jitter = 0.0;
  return cfg;
}

double LatencyBreakdown::total() const {
  return std::accumulate(module_s.begin(), module_s.end(), network_s);
}

FogEnvironment::FogEnvironment(ApplicationProfile profile, EnvironmentConfig config, std::uint64_t seed)
    : profile_(std::move(profile)),
      config_(std::move(config)),
      stress_(StressProcess::fixed(0, config_.node.capacity_units)),
      link_rng_(derive_seed(seed, Stream::kLink)),
      counter_rng_(derive_seed(seed, Stream::kCounters)) {
  profile_.validate();
  if (!(config_.link_jitter >= 0 && config_.link_jitter < 1)) {
    throw std::invalid_argument("environment: link_jitter must lie in [0, 1)");
  }
  if (!(config_.link_interval_s > 0)) throw std::invalid_argument("environment: link_interval_s must be > 0");
  for (const auto& m : profile_.modules) {
    if (m.demand.cpu_units > config_.node.capacity_units) {
      throw std::invalid_argument("environment: module '" + m.name + "' demands more cores than the node has");
    }
  }
  if (config_.fixed_load) {
    stress_ = StressProcess::fixed(*config_.fixed_load, config_.node.capacity_units);
  } else if (config_.stress_enabled) {
    stress_ = StressProcess(derive_seed(seed, Stream::kStress), config_.node.capacity_units,
                            config_.stress_interval_s);
  }
  draw_link_factors();

  // Counters as found on a node that has been up for a while.
  io_reads_ = std::floor(counter_rng_.uniform(2.0e4, 6.0e4));
  io_writes_ = std::floor(counter_rng_.uniform(2.0e4, 6.0e4));
  io_read_bytes_ = std::floor(counter_rng_.uniform(2.0e8, 6.0e8));
  io_write_bytes_ = std::floor(counter_rng_.uniform(2.0e8, 6.0e8));
  net_bytes_sent_ = std::floor(counter_rng_.uniform(1.0e7, 5.0e7));
  net_bytes_recv_ = std::floor(counter_rng_.uniform(1.0e7, 5.0e7));
  net_pkts_sent_ = std::floor(counter_rng_.uniform(1.0e4, 5.0e4));
  net_pkts_recv_ = std::floor(counter_rng_.uniform(1.0e4, 5.0e4));
}

void FogEnvironment::draw_link_factors() {
  const double j = config_.link_jitter;
  fog_cloud_factor_ = 1.0 + j * (2.0 * link_rng_.uniform() - 1.0);
  dev_cloud_factor_ = 1.0 + j * (2.0 * link_rng_.uniform() - 1.0);
}

void FogEnvironment::advance_links(double dt) {
  const long target = interval_of(now_ + dt, config_.link_interval_s);
  for (; link_interval_index_ < target; ++link_interval_index_) draw_link_factors();
}

void FogEnvironment::add_background_traffic(double dt) {
  const double disk_noise = counter_rng_.uniform(0.5, 1.5);
  const double net_noise = counter_rng_.uniform(0.5, 1.5);
  io_reads_ += kBackgroundReads * dt * disk_noise;
  io_writes_ += kBackgroundWrites * dt * disk_noise;
  io_read_bytes_ += kBackgroundReadBytes * dt * disk_noise;
  io_write_bytes_ += kBackgroundWriteBytes * dt * disk_noise;
  const double net_bytes = kBackgroundNetBytes * dt * net_noise;
  net_bytes_sent_ += net_bytes;
  net_bytes_recv_ += net_bytes;
  net_pkts_sent_ += net_bytes / kPacketPayloadBytes;
  net_pkts_recv_ += net_bytes / kPacketPayloadBytes;
}

void FogEnvironment::advance(double dt) {
  if (dt <= 0) return;
  stress_ = advance_stress(std::move(stress_), dt);
  advance_links(dt);
  add_background_traffic(dt);
  now_ += dt;
}

FogNodeState FogEnvironment::observe_state() const {
  const NodeSpec& node = config_.node;
  const int load = stress_.current_load();

  double deployed_mem = 0;
  for (int i = 0; i < deployed_k_; ++i) deployed_mem += profile_.modules[i].demand.mem_gb;
  const double mem_demand = node.unit_mem_gb * load + deployed_mem;

  FogNodeState s;
  s.cpu_util = static_cast<double>(load) / node.capacity_units;
  s.cpu_count = node.capacity_units;
  s.cpu_freq = (load > 0 || deployed_k_ > 0) ? node.cpu_freq_busy_mhz : node.cpu_freq_idle_mhz;
  s.mem_total = node.mem_total_gb;
  s.mem_used = std::min(node.mem_total_gb, mem_demand);
  s.swap_total = node.swap_total_gb;
  s.swap_used = std::min(node.swap_total_gb, std::max(0.0, mem_demand - node.mem_total_gb));
  s.disk_total = node.disk_total_gb;
  s.disk_used = std::min(node.disk_total_gb, node.disk_base_used_gb + io_write_bytes_ / 1.0e9);
  s.io_reads = std::floor(io_reads_);
  s.io_writes = std::floor(io_writes_);
  s.io_read_bytes = std::floor(io_read_bytes_);
  s.io_write_bytes = std::floor(io_write_bytes_);
  s.net_bytes_sent = std::floor(net_bytes_sent_);
  s.net_bytes_recv = std::floor(net_bytes_recv_);
  s.net_pkts_sent = std::floor(net_pkts_sent_);
  s.net_pkts_recv = std::floor(net_pkts_recv_);
  s.delay_fog_cloud = profile_.base_delay_fog_cloud_ms * fog_cloud_factor_;
  s.delay_dev_cloud = profile_.base_delay_dev_cloud_ms * dev_cloud_factor_;
  return s;
}

DeploymentRecord FogEnvironment::execute_deployment(int k) {
  const int n = profile_.n_modules();
  if (k < 0 || k > n) {
    throw std::domain_error("execute_deployment: k=" + std::to_string(k) + " outside [0, " + std::to_string(n) +
                            "]");
  }
  deployed_k_ = k;

  DeploymentRecord record;
  record.outcome.k = k;
  record.outcome.requests = profile_.requests_per_deployment;
  for (int i = 0; i < k; ++i) record.outcome.usage += profile_.modules[i].demand;

  const double surviving = profile_.surviving_data(k);
  const double surviving_bytes =
      profile_.raw_request_data > 0 ? profile_.raw_request_bytes * surviving / profile_.raw_request_data : 0.0;
  const double base_network = transmission_time(surviving, profile_);

  std::vector<double> module_total(static_cast<std::size_t>(n), 0.0);
  double network_total = 0.0;
  double elapsed = 0.0;

  for (long r = 0; r < profile_.requests_per_deployment; ++r) {
    const double available = config_.node.capacity_units - stress_.current_load();
    double request_time = 0.0;

    for (int i = 0; i < n; ++i) {
      const auto& m = profile_.modules[i];
      const double t = i < k ? contended_time(m.compute_s + m.fog_extra_s, m.demand.cpu_units, available)
                             : m.compute_s;
      module_total[i] += t;
      request_time += t;
    }
    const double link = k == 0 ? profile_.device_link_factor * dev_cloud_factor_ : fog_cloud_factor_;
    const double network = base_network * link;
    network_total += network;
    request_time += network;

    if (k > 0) {
      net_bytes_recv_ += profile_.raw_request_bytes;
      net_pkts_recv_ += packets_for(profile_.raw_request_bytes);
      net_bytes_sent_ += surviving_bytes;
      net_pkts_sent_ += packets_for(surviving_bytes);
      io_reads_ += kModuleReads * k;
      io_writes_ += kModuleWrites * k;
      io_read_bytes_ += kModuleReadBytes * k;
      io_write_bytes_ += kModuleWriteBytes * k;
    }

    advance(request_time);
    elapsed += request_time;
  }

  const double requests = static_cast<double>(profile_.requests_per_deployment);
  record.outcome.t_seconds = elapsed;
  record.per_request.network_s = network_total / requests;
  record.per_request.module_s.resize(module_total.size());
  for (std::size_t i = 0; i < module_total.size(); ++i) record.per_request.module_s[i] = module_total[i] / requests;
  return record;
}

}  // namespace fogdist
