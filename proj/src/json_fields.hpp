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

#include <set>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "fogdist/errors.hpp"

namespace fogdist::detail {

// Strict reader over one JSON object: typed lookups, and finish() rejects any
// key that was never looked up.
class FieldReader {
 public:
  FieldReader(const nlohmann::json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(display_path(), "expected an object");
  }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return object_.contains(key); }

  template <typename T>
  void optional(const std::string& key, T& out) {
    if (!object_.contains(key)) return;
    seen_.insert(key);
    out = convert<T>(object_.at(key), child_path(key));
  }

  template <typename T>
  T required(const std::string& key) {
    if (!object_.contains(key)) throw ConfigError(child_path(key), "missing required field");
    seen_.insert(key);
    return convert<T>(object_.at(key), child_path(key));
  }

  const nlohmann::json* child(const std::string& key) {
    if (!object_.contains(key)) return nullptr;
    seen_.insert(key);
    return &object_.at(key);
  }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(child_path(item.key()), "unknown key");
    }
  }

 private:
  std::string display_path() const { return path_.empty() ? "<root>" : path_; }

  template <typename T>
  static T convert(const nlohmann::json& value, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw ConfigError(path, "expected a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
      return value.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw ConfigError(path, "expected a number");
      return value.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw ConfigError(path, "expected a string");
      return value.get<std::string>();
    } else {
      static_assert(std::is_same_v<T, void>, "unsupported field type");
    }
  }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace fogdist::detail
