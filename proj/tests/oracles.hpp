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


// Independent reference computations shared by the unit tests and the
// acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fogdist/qnetwork.hpp"
#include "fogdist/random.hpp"

namespace fogdist::oracle {

inline double squared_error(const QNetwork& net, const std::vector<double>& s, std::size_t action, double target) {
  const double d = forward(net, s)[action] - target;
  return d * d;
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
};

// Compares loss_gradient against central differences over every parameter
// of `cases` random (network, state, action, target) tuples.
inline GradientCheck check_gradients(const NetworkArchitecture& arch, int cases, double h, std::uint64_t seed) {
  GradientCheck out;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    QNetwork net = init_network(arch, rng.next());
    for (auto& layer : net.layers()) {
      for (double& b : layer.bias) b = rng.uniform(-0.5, 0.5);
    }
    std::vector<double> s(arch.input_dim);
    for (double& x : s) x = rng.uniform(-1.0, 1.0);
    const std::size_t action = rng.index(arch.output_dim);
    const double target = rng.uniform(-2.0, 2.0);

    const Gradient analytic = loss_gradient(net, s, action, target);
    auto compare = [&](double& param, double g) {
      const double saved = param;
      param = saved + h;
      const double up = squared_error(net, s, action, target);
      param = saved - h;
      const double down = squared_error(net, s, action, target);
      param = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double scale = std::max({std::abs(g), std::abs(numeric), 1e-6});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(g - numeric) / scale);
      ++out.parameters_checked;
    };
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      auto& layer = net.layers()[l];
      const auto& g = analytic.layers[l];
      for (std::size_t i = 0; i < layer.weights.size(); ++i) compare(layer.weights[i], g.weights[i]);
      for (std::size_t i = 0; i < layer.bias.size(); ++i) compare(layer.bias[i], g.bias[i]);
    }
  }
  return out;
}

}  // namespace fogdist::oracle
