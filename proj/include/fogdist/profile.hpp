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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fogdist/model.hpp"

namespace fogdist {

/*
 * One service of a modular application. Modules form a pipeline: module i
 * receives what module i-1 emitted. `data_out_ratio` scales the payload size
 * and `pass_fraction` thins the number of requests that continue downstream
 * (a filter). Thinning is applied in expectation so a deployment is
 * deterministic given the node's load and link trajectories.
 */
struct ModuleProfile {
  std::string name;
  double compute_s = 0.0;    // per request, one uncontended unit
  double fog_extra_s = 0.0;  // added when hosted on the Fog node
  double data_out_ratio = 1.0;
  double pass_fraction = 1.0;
  ResourceUsage demand;
};

struct ApplicationProfile {
  std::string name;
  std::vector<ModuleProfile> modules;
  double raw_request_data = 1.0;        // size units
  double raw_request_bytes = 1.0e6;     // what one raw payload weighs on the wire
  long requests_per_deployment = 20;
  double uplink_seconds_per_raw_unit = 2.28;
  double device_link_factor = 1.0;      // device->Cloud path relative to Fog->Cloud
  double base_delay_fog_cloud_ms = 25.0;
  double base_delay_dev_cloud_ms = 40.0;

  int n_modules() const { return static_cast<int>(modules.size()); }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Payload, in size units, that crosses to the Cloud when the first k
  // modules run on the Fog node (k = 0 is the raw request).
  double surviving_data(int k) const;
};

// data * uplink_seconds_per_raw_unit.
double transmission_time(double data, const ApplicationProfile& profile);

// Face detection (N = 3) and the location-based game server (N = 2).
std::pair<ApplicationProfile, ApplicationProfile> builtin_profiles();

// "fd" / "ipokemon", or a path to a profile JSON file.
ApplicationProfile resolve_profile(const std::string& name_or_path);

ApplicationProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const ApplicationProfile& profile);
ApplicationProfile load_profile(const std::filesystem::path& path);

}  // namespace fogdist
