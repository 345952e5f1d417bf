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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace fogdist {

struct NetworkArchitecture {
  std::size_t input_dim = 19;
  std::size_t hidden_layers = 2;
  std::size_t hidden_width = 24;
  std::size_t output_dim = 4;

  // Throws std::domain_error on a zero dimension.
  void validate() const;

  bool operator==(const NetworkArchitecture&) const = default;
};

// Fully connected layer; weights are row-major, one row per output unit.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& weight(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  bool operator==(const DenseLayer&) const = default;
};

/*
 * Action-value approximator: input -> hidden_layers x (dense + ReLU) -> dense
 * (linear) -> one value per action. A plain value type; copying yields an
 * independent network, which is how the target network is held.
 */
class QNetwork {
 public:
  // All parameters zero.
  explicit QNetwork(const NetworkArchitecture& arch);

  const NetworkArchitecture& architecture() const { return arch_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::size_t parameter_count() const;

  /*
   * Text layout, one token group per line:
   *   fogdist-qnet 1
   *   arch <input_dim> <hidden_layers> <hidden_width> <output_dim>
   *   then per layer: "layer <inputs> <outputs>", a line of inputs*outputs
   *   weights (row-major), a line of outputs biases
   *   end
   * Numbers use the shortest round-trip decimal form, so write/read is exact.
   */
  void write(std::ostream& out) const;
  static QNetwork read(std::istream& in);

  bool operator==(const QNetwork&) const = default;

 private:
  NetworkArchitecture arch_;
  std::vector<DenseLayer> layers_;
};

// Weights ~ U(-b, b) with b = sqrt(6 / (fan_in + fan_out)); biases zero.
QNetwork init_network(const NetworkArchitecture& arch, std::uint64_t seed);

std::vector<double> forward(const QNetwork& net, std::span<const double> state);

// Gradient of (target - Q(state)[action])^2 with respect to every parameter,
// laid out like the network's own layers.
struct Gradient {
  std::vector<DenseLayer> layers;
  double loss = 0.0;
};

Gradient loss_gradient(const QNetwork& net, std::span<const double> state, std::size_t action, double target);

// One plain gradient-descent step on the squared error of one action.
// Returns the loss before the update.
double sgd_step(QNetwork& net, std::span<const double> state, std::size_t action, double target, double lr);

inline QNetwork clone_into_target(const QNetwork& net) { return net; }

}  // namespace fogdist
