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

#include "fogdist/config.hpp"

#include <cstdio>
#include <fstream>

#include "json_fields.hpp"

namespace fogdist {

namespace {

using nlohmann::json;

template <typename Fn>
void rethrow_as_config_error(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

PricingModel pricing_from_json(const json& j, const std::string& path) {
  detail::FieldReader r(j, path);
  PricingModel p;
  r.optional("p_vm", p.p_vm);
  r.optional("p_cpu", p.p_cpu);
  r.optional("p_mem", p.p_mem);
  r.optional("p_str", p.p_str);
  r.optional("lambda", p.lambda);
  r.finish();
  return p;
}

json pricing_to_json(const PricingModel& p) {
  return {{"p_vm", p.p_vm}, {"p_cpu", p.p_cpu}, {"p_mem", p.p_mem}, {"p_str", p.p_str}, {"lambda", p.lambda}};
}

UtilityWeights weights_from_json(const json& j, const std::string& path) {
  detail::FieldReader r(j, path);
  UtilityWeights w;
  r.optional("alpha", w.alpha);
  r.optional("beta", w.beta);
  r.finish();
  return w;
}

json weights_to_json(const UtilityWeights& w) { return {{"alpha", w.alpha}, {"beta", w.beta}}; }

std::size_t factor_index(const std::string& name, const std::string& path) {
  const auto& names = FogNodeState::factor_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw ConfigError(path, "unknown state factor '" + name + "'");
}

EnvironmentConfig environment_from_json(const json& j, const std::string& path) {
  detail::FieldReader r(j, path);
  EnvironmentConfig e;
  r.optional("stress_enabled", e.stress_enabled);
  if (const json* fixed = r.child("fixed_load"); fixed != nullptr && !fixed->is_null()) {
    if (!fixed->is_number_integer()) throw ConfigError(r.child_path("fixed_load"), "expected an integer or null");
    e.fixed_load = fixed->get<int>();
  }
  r.optional("stress_interval_s", e.stress_interval_s);
  r.optional("link_jitter", e.link_jitter);
  r.optional("link_interval_s", e.link_interval_s);
  if (const json* bounds = r.child("state_bounds")) {
    const std::string bpath = r.child_path("state_bounds");
    if (!bounds->is_object()) throw ConfigError(bpath, "expected an object");
    for (const auto& item : bounds->items()) {
      const std::string fpath = bpath + "." + item.key();
      const std::size_t idx = factor_index(item.key(), fpath);
      const json& v = item.value();
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(fpath, "expected [lo, hi]");
      }
      e.bounds.range[idx] = {v[0].get<double>(), v[1].get<double>()};
    }
  }
  r.finish();
  return e;
}

json environment_to_json(const EnvironmentConfig& e) {
  json bounds = json::object();
  const auto& names = FogNodeState::factor_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    bounds[std::string(names[i])] = {e.bounds.range[i].first, e.bounds.range[i].second};
  }
  return {{"stress_enabled", e.stress_enabled},
          {"fixed_load", e.fixed_load ? json(*e.fixed_load) : json(nullptr)},
          {"stress_interval_s", e.stress_interval_s},
          {"link_jitter", e.link_jitter},
          {"link_interval_s", e.link_interval_s},
          {"state_bounds", bounds}};
}

AgentConfig agent_from_reader(detail::FieldReader& r, bool allow_weights) {
  AgentConfig a;
  r.optional("gamma", a.gamma);
  r.optional("batch_size", a.batch_size);
  r.optional("lr", a.lr);
  r.optional("epsilon", a.schedule.epsilon_start);
  r.optional("epsilon_min", a.schedule.epsilon_min);
  r.optional("epsilon_decay", a.schedule.decay);
  r.optional("epsilon_steps", a.schedule.steps);
  r.optional("replay_capacity", a.replay_capacity);
  r.optional("hidden_layers", a.hidden_layers);
  r.optional("hidden_width", a.hidden_width);
  r.optional("target_sync", a.target_sync);
  r.optional("literal_state_carry", a.literal_state_carry);
  r.optional("reward_scale", a.reward_scale);
  if (allow_weights) {
    if (const json* w = r.child("weights")) a.weights = weights_from_json(*w, r.child_path("weights"));
  }
  r.finish();
  return a;
}

}  // namespace

json agent_config_to_json(const AgentConfig& a) {
  return {{"gamma", a.gamma},
          {"batch_size", a.batch_size},
          {"lr", a.lr},
          {"epsilon", a.schedule.epsilon_start},
          {"epsilon_min", a.schedule.epsilon_min},
          {"epsilon_decay", a.schedule.decay},
          {"epsilon_steps", a.schedule.steps},
          {"replay_capacity", a.replay_capacity},
          {"hidden_layers", a.hidden_layers},
          {"hidden_width", a.hidden_width},
          {"target_sync", a.target_sync},
          {"literal_state_carry", a.literal_state_carry},
          {"reward_scale", a.reward_scale},
          {"weights", weights_to_json(a.weights)}};
}

AgentConfig agent_config_from_json(const json& j, const std::string& path) {
  detail::FieldReader r(j, path);
  AgentConfig a = agent_from_reader(r, true);
  rethrow_as_config_error(path, [&] { a.validate(); });
  return a;
}

void ExperimentConfig::validate() const {
  rethrow_as_config_error("pricing", [&] { pricing.validate(); });
  rethrow_as_config_error("weights", [&] { weights.validate(); });
  rethrow_as_config_error("agent", [&] { agent.validate(); });
  rethrow_as_config_error("profile", [&] { profile.validate(); });
  if (deployments < 1) throw ConfigError("deployments", "must be >= 1");
  if (episodes < 1) throw ConfigError("episodes", "must be >= 1");
  if (eval_experiments < 1) throw ConfigError("eval_experiments", "must be >= 1");
  if (environment.fixed_load && (*environment.fixed_load < 0 || *environment.fixed_load >= environment.node.capacity_units)) {
    throw ConfigError("environment.fixed_load", "must lie in [0, capacity)");
  }
  if (!(environment.link_jitter >= 0 && environment.link_jitter < 1)) {
    throw ConfigError("environment.link_jitter", "must lie in [0, 1)");
  }
  if (!(environment.stress_interval_s > 0)) throw ConfigError("environment.stress_interval_s", "must be > 0");
  if (!(environment.link_interval_s > 0)) throw ConfigError("environment.link_interval_s", "must be > 0");
}

ExperimentConfig default_config(const std::string& profile) {
  ExperimentConfig cfg;
  cfg.profile_ref = profile;
  cfg.profile = resolve_profile(profile);
  cfg.episodes = cfg.profile.name == "ipokemon" ? 400 : 600;
  cfg.agent.weights = cfg.weights;
  return cfg;
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  detail::FieldReader r(j, "");
  ExperimentConfig cfg;

  int schema = kConfigSchemaVersion;
  r.optional("schema_version", schema);
  if (schema != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(schema));
  }

  if (const json* profile = r.child("profile")) {
    if (profile->is_string()) {
      cfg.profile_ref = profile->get<std::string>();
      if (cfg.profile_ref == "fd" || cfg.profile_ref == "ipokemon") {
        cfg.profile = resolve_profile(cfg.profile_ref);
      } else {
        std::filesystem::path p(cfg.profile_ref);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        if (!std::filesystem::exists(p)) throw ConfigError("profile", "profile file not found: " + p.string());
        cfg.profile = load_profile(p);
      }
    } else if (profile->is_object()) {
      cfg.profile_ref = "inline";
      cfg.profile = profile_from_json(*profile);
    } else {
      throw ConfigError("profile", "expected a profile name, a path, or an inline profile object");
    }
  } else {
    cfg.profile = resolve_profile(cfg.profile_ref);
  }
  if (cfg.profile_ref == "inline") r.optional("profile_ref", cfg.profile_ref);
  cfg.episodes = cfg.profile.name == "ipokemon" ? 400 : 600;

  if (const json* p = r.child("pricing")) cfg.pricing = pricing_from_json(*p, "pricing");
  if (const json* w = r.child("weights")) cfg.weights = weights_from_json(*w, "weights");
  r.optional("deployments", cfg.deployments);
  r.optional("episodes", cfg.episodes);
  r.optional("eval_experiments", cfg.eval_experiments);
  r.optional("master_seed", cfg.master_seed);
  if (const json* a = r.child("agent")) {
    detail::FieldReader ar(*a, "agent");
    cfg.agent = agent_from_reader(ar, false);
  }
  if (const json* e = r.child("environment")) cfg.environment = environment_from_json(*e, "environment");
  r.finish();

  cfg.agent.weights = cfg.weights;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("parse error: ") + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
  json agent = agent_config_to_json(cfg.agent);
  agent.erase("weights");
  return {{"schema_version", kConfigSchemaVersion},
          {"profile_ref", cfg.profile_ref},
          {"profile", profile_to_json(cfg.profile)},
          {"pricing", pricing_to_json(cfg.pricing)},
          {"weights", weights_to_json(cfg.weights)},
          {"deployments", cfg.deployments},
          {"episodes", cfg.episodes},
          {"eval_experiments", cfg.eval_experiments},
          {"master_seed", cfg.master_seed},
          {"agent", agent},
          {"environment", environment_to_json(cfg.environment)}};
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fogdist
