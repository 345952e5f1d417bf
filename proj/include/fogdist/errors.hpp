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

#include <stdexcept>
#include <string>

namespace fogdist {

// Raised for malformed or invalid configuration and profile files. The
// message starts with the JSON field path, e.g. "agent.gamma: ...".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field_path, const std::string& what)
      : std::runtime_error(field_path + ": " + what), field_path_(field_path) {}

  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

}  // namespace fogdist
