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

#include <span>

namespace fogdist {

/*
 * Prices are US dollars per hour for one unit of resource: a whole VM, one
 * vCPU core, 1 GB of memory, 1 GB of storage. Fog resources are billed at
 * `lambda` times the matching Cloud resource price.
 */
struct PricingModel {
  double p_vm = 0.0132;
  double p_cpu = 0.04073;
  double p_mem = 0.005458;
  double p_str = 0.000032;
  double lambda = 0.01;

  // Throws std::invalid_argument on negative prices or lambda outside (0, 10].
  void validate() const;
};

// Both weights are penalties (<= 0); at least one must be non-zero.
struct UtilityWeights {
  double alpha = -1.0;
  double beta = -1.0;

  void validate() const;
};

// Average Fog resources held during one deployment. Memory and storage in GB.
struct ResourceUsage {
  double cpu_units = 0.0;
  double mem_gb = 0.0;
  double str_gb = 0.0;

  ResourceUsage& operator+=(const ResourceUsage& other) {
    cpu_units += other.cpu_units;
    mem_gb += other.mem_gb;
    str_gb += other.str_gb;
    return *this;
  }
};

struct DeploymentOutcome {
  int k = 0;
  double t_seconds = 0.0;
  long requests = 1;
  ResourceUsage usage;
  double decision_latency_ms = 0.0;
};

constexpr double seconds_to_hours(double seconds) { return seconds / 3600.0; }

// C_C = P_C * T.
double cloud_cost(const PricingModel& pricing, double t_hours);

// C_F = lambda * (P_cpu, P_mem, P_str) . (R_cpu, R_mem, R_str) * T.
double fog_cost(const PricingModel& pricing, const ResourceUsage& usage, double t_hours);

// Cloud-only (k = 0) pays the VM, Fog-only (k = n_modules) pays the Fog
// resources, anything in between pays both.
double deployment_cost(int k, int n_modules, const PricingModel& pricing, const ResourceUsage& usage,
                       double t_hours);

// alpha * T/R + beta * C with T in seconds.
double deployment_utility(const UtilityWeights& weights, const DeploymentOutcome& outcome, double cost);

// Sum over m >= 1 deployments.
double strategy_utility(std::span<const double> per_deployment);

}  // namespace fogdist
