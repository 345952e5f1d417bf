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
#include <string>

#include <json.hpp>

#include "fogdist/agent.hpp"
#include "fogdist/environment.hpp"
#include "fogdist/errors.hpp"
#include "fogdist/model.hpp"
#include "fogdist/profile.hpp"

namespace fogdist {

inline constexpr int kConfigSchemaVersion = 1;

// Everything one experiment run needs. See docs/formats.md for the JSON
// schema; omitted fields keep the defaults below.
struct ExperimentConfig {
  std::string profile_ref = "fd";  // "fd", "ipokemon", a file path, or "inline"
  ApplicationProfile profile;
  PricingModel pricing;
  UtilityWeights weights;
  int deployments = 20;
  int episodes = 600;
  int eval_experiments = 100;
  std::uint64_t master_seed = 1;
  AgentConfig agent;
  EnvironmentConfig environment;

  // Throws ConfigError.
  void validate() const;
};

// A config with every default filled in and the built-in profile resolved.
ExperimentConfig default_config(const std::string& profile = "fd");

// Relative profile paths resolve against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical form: every field present, the profile inlined. Its compact dump
// is what config_hash() digests.
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

nlohmann::json agent_config_to_json(const AgentConfig& config);
AgentConfig agent_config_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace fogdist
