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

#include "fogdist/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fogdist {

void PricingModel::validate() const {
  if (p_vm < 0 || p_cpu < 0 || p_mem < 0 || p_str < 0) {
    throw std::invalid_argument("pricing: prices must be non-negative");
  }
  if (!(lambda > 0.0 && lambda <= 10.0)) {
    throw std::invalid_argument("pricing.lambda: must lie in (0, 10], got " + std::to_string(lambda));
  }
}

void UtilityWeights::validate() const {
  if (alpha > 0 || beta > 0) {
    throw std::invalid_argument("weights: alpha and beta must be <= 0");
  }
  if (alpha == 0 && beta == 0) {
    throw std::invalid_argument("weights: alpha and beta cannot both be zero");
  }
}

double cloud_cost(const PricingModel& pricing, double t_hours) {
  if (!(t_hours >= 0)) throw std::domain_error("cloud_cost: negative duration");
  return pricing.p_vm * t_hours;
}

double fog_cost(const PricingModel& pricing, const ResourceUsage& usage, double t_hours) {
  if (!(t_hours >= 0)) throw std::domain_error("fog_cost: negative duration");
  if (usage.cpu_units < 0 || usage.mem_gb < 0 || usage.str_gb < 0) {
    throw std::domain_error("fog_cost: negative resource usage");
  }
  const double rate = pricing.p_cpu * usage.cpu_units + pricing.p_mem * usage.mem_gb + pricing.p_str * usage.str_gb;
  return pricing.lambda * rate * t_hours;
}

double deployment_cost(int k, int n_modules, const PricingModel& pricing, const ResourceUsage& usage,
                       double t_hours) {
  if (k < 0 || k > n_modules) {
    throw std::domain_error("deployment_cost: k=" + std::to_string(k) + " outside [0, " + std::to_string(n_modules) +
                            "]");
  }
  if (k == 0) return cloud_cost(pricing, t_hours);
  if (k == n_modules) return fog_cost(pricing, usage, t_hours);
  return cloud_cost(pricing, t_hours) + fog_cost(pricing, usage, t_hours);
}

double deployment_utility(const UtilityWeights& weights, const DeploymentOutcome& outcome, double cost) {
  if (outcome.requests < 1) throw std::domain_error("deployment_utility: deployment served no requests");
  return weights.alpha * (outcome.t_seconds / static_cast<double>(outcome.requests)) + weights.beta * cost;
}

double strategy_utility(std::span<const double> per_deployment) {
  if (per_deployment.empty()) throw std::domain_error("strategy_utility: empty deployment sequence");
  return std::accumulate(per_deployment.begin(), per_deployment.end(), 0.0);
}

}  // namespace fogdist
