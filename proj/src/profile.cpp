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

#include "fogdist/profile.hpp"

#include <fstream>
#include <stdexcept>

#include "fogdist/errors.hpp"
#include "json_fields.hpp"

namespace fogdist {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw std::invalid_argument("profile." + field + ": " + what);
}

// Face detection calibration. Transmission of one raw frame from the Fog
// node to the Cloud VM takes 2.28 s; after grey-scaling 0.77 s, after motion
// filtering 0.52 s, and uploading only the detection result 0.11 s.
constexpr double kFrameUplinkSeconds = 2.28;
constexpr double kGreyRatio = 1.0 / 3.0;
constexpr double kMotionPass = 0.675;    // 0.52 / 0.77
constexpr double kResultOfRaw = 0.048;   // 0.11 / 2.28
// Cloud-side face detector time chosen so a Cloud-only frame totals 2.3 s.
constexpr double kFaceCloudSeconds = 2.3 - kFrameUplinkSeconds - 0.003 - 0.004;

ApplicationProfile face_detection() {
  ApplicationProfile p;
  p.name = "fd";
  p.raw_request_data = 1.0;
  p.raw_request_bytes = 640.0 * 480.0 * 3.0;
  p.requests_per_deployment = 20;
  p.uplink_seconds_per_raw_unit = kFrameUplinkSeconds;
  p.device_link_factor = 1.0;
  p.base_delay_fog_cloud_ms = 25.0;
  p.base_delay_dev_cloud_ms = 40.0;
  p.modules = {
      {"grey-scale", 0.003, 0.0, kGreyRatio, 1.0, {1.0, 0.25, 0.1}},
      {"motion-detector", 0.004, 0.0, 1.0, kMotionPass, {1.0, 0.25, 0.1}},
      {"face-detector", kFaceCloudSeconds, 0.2, kResultOfRaw / (kGreyRatio * kMotionPass), 1.0, {4.0, 1.0, 0.5}},
  };
  return p;
}

// Game server split into the handler for known players (Fog-capable, serves
// most traffic) and the handler for new players. Only requests from new
// players continue past the first module.
ApplicationProfile ipokemon() {
  ApplicationProfile p;
  p.name = "ipokemon";
  p.raw_request_data = 1.0;
  p.raw_request_bytes = 2048.0;
  p.requests_per_deployment = 100;
  p.uplink_seconds_per_raw_unit = 0.08;
  p.device_link_factor = 1.6;
  p.base_delay_fog_cloud_ms = 30.0;
  p.base_delay_dev_cloud_ms = 60.0;
  p.modules = {
      {"known-player-server", 0.005, 0.015, 1.0, 0.3, {3.0, 0.5, 0.25}},
      {"new-player-server", 0.010, 0.030, 0.1, 1.0, {3.0, 0.5, 0.5}},
  };
  return p;
}

}  // namespace

void ApplicationProfile::validate() const {
  require(!modules.empty(), "modules", "at least one module is required");
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const auto& m = modules[i];
    const std::string field = "modules[" + std::to_string(i) + "]";
    require(m.compute_s >= 0, field + ".compute_s", "must be >= 0");
    require(m.fog_extra_s >= 0, field + ".fog_extra_s", "must be >= 0");
    require(m.data_out_ratio > 0 && m.data_out_ratio <= 1, field + ".data_out_ratio", "must lie in (0, 1]");
    require(m.pass_fraction > 0 && m.pass_fraction <= 1, field + ".pass_fraction", "must lie in (0, 1]");
    require(m.demand.cpu_units >= 0 && m.demand.mem_gb >= 0 && m.demand.str_gb >= 0, field + ".demand",
            "must be non-negative");
  }
  require(raw_request_data >= 0, "raw_request_data", "must be >= 0");
  require(raw_request_bytes >= 0, "raw_request_bytes", "must be >= 0");
  require(requests_per_deployment >= 1, "requests_per_deployment", "must be >= 1");
  require(uplink_seconds_per_raw_unit >= 0, "uplink_seconds_per_raw_unit", "must be >= 0");
  require(device_link_factor > 0, "device_link_factor", "must be > 0");
  require(base_delay_fog_cloud_ms > 0, "base_delay_fog_cloud_ms", "must be > 0");
  require(base_delay_dev_cloud_ms > 0, "base_delay_dev_cloud_ms", "must be > 0");
}

double ApplicationProfile::surviving_data(int k) const {
  if (k < 0 || k > n_modules()) throw std::domain_error("surviving_data: k out of range");
  double data = raw_request_data;
  for (int i = 0; i < k; ++i) data *= modules[i].data_out_ratio * modules[i].pass_fraction;
  return data;
}

double transmission_time(double data, const ApplicationProfile& profile) {
  if (!(data >= 0)) throw std::domain_error("transmission_time: negative data size");
  return data * profile.uplink_seconds_per_raw_unit;
}

std::pair<ApplicationProfile, ApplicationProfile> builtin_profiles() { return {face_detection(), ipokemon()}; }

ApplicationProfile resolve_profile(const std::string& name_or_path) {
  auto [fd, pm] = builtin_profiles();
  if (name_or_path == "fd") return fd;
  if (name_or_path == "ipokemon") return pm;
  return load_profile(name_or_path);
}

ApplicationProfile profile_from_json(const nlohmann::json& j) {
  detail::FieldReader root(j, "");
  ApplicationProfile p;
  p.name = root.required<std::string>("name");
  root.optional("raw_request_data", p.raw_request_data);
  root.optional("raw_request_bytes", p.raw_request_bytes);
  root.optional("requests_per_deployment", p.requests_per_deployment);
  root.optional("uplink_seconds_per_raw_unit", p.uplink_seconds_per_raw_unit);
  root.optional("device_link_factor", p.device_link_factor);
  root.optional("base_delay_fog_cloud_ms", p.base_delay_fog_cloud_ms);
  root.optional("base_delay_dev_cloud_ms", p.base_delay_dev_cloud_ms);
  long declared_n = -1;
  root.optional("n_modules", declared_n);

  const auto* modules = root.child("modules");
  if (modules == nullptr) throw ConfigError("modules", "missing required field");
  if (!modules->is_array()) throw ConfigError("modules", "expected an array");
  for (std::size_t i = 0; i < modules->size(); ++i) {
    const std::string path = "modules[" + std::to_string(i) + "]";
    detail::FieldReader mr((*modules)[i], path);
    ModuleProfile m;
    m.name = mr.required<std::string>("name");
    mr.optional("compute_s", m.compute_s);
    mr.optional("fog_extra_s", m.fog_extra_s);
    mr.optional("data_out_ratio", m.data_out_ratio);
    mr.optional("pass_fraction", m.pass_fraction);
    if (const auto* demand = mr.child("demand")) {
      detail::FieldReader dr(*demand, path + ".demand");
      dr.optional("cpu_units", m.demand.cpu_units);
      dr.optional("mem_gb", m.demand.mem_gb);
      dr.optional("str_gb", m.demand.str_gb);
      dr.finish();
    }
    mr.finish();
    p.modules.push_back(std::move(m));
  }
  root.finish();

  if (declared_n >= 0 && declared_n != p.n_modules()) {
    throw ConfigError("n_modules", "declares " + std::to_string(declared_n) + " modules but " +
                                       std::to_string(p.n_modules()) + " are listed");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("profile", e.what());
  }
  return p;
}

nlohmann::json profile_to_json(const ApplicationProfile& p) {
  nlohmann::json modules = nlohmann::json::array();
  for (const auto& m : p.modules) {
    modules.push_back({{"name", m.name},
                       {"compute_s", m.compute_s},
                       {"fog_extra_s", m.fog_extra_s},
                       {"data_out_ratio", m.data_out_ratio},
                       {"pass_fraction", m.pass_fraction},
                       {"demand", {{"cpu_units", m.demand.cpu_units},
                                   {"mem_gb", m.demand.mem_gb},
                                   {"str_gb", m.demand.str_gb}}}});
  }
  return {{"name", p.name},
          {"n_modules", p.n_modules()},
          {"raw_request_data", p.raw_request_data},
          {"raw_request_bytes", p.raw_request_bytes},
          {"requests_per_deployment", p.requests_per_deployment},
          {"uplink_seconds_per_raw_unit", p.uplink_seconds_per_raw_unit},
          {"device_link_factor", p.device_link_factor},
          {"base_delay_fog_cloud_ms", p.base_delay_fog_cloud_ms},
          {"base_delay_dev_cloud_ms", p.base_delay_dev_cloud_ms},
          {"modules", modules}};
}

ApplicationProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open profile file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("parse error: ") + e.what());
  }
  return profile_from_json(j);
}

}  // namespace fogdist
