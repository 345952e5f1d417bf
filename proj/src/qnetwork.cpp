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

#include "fogdist/qnetwork.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fogdist/format.hpp"
#include "fogdist/random.hpp"

namespace fogdist {

namespace {

constexpr const char* kMagic = "fogdist-qnet";
constexpr int kFormatVersion = 1;

struct Activations {
  // post[0] is the input; post[l + 1] is the output of layer l.
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

void check_input(const QNetwork& net, std::span<const double> state) {
  if (state.size() != net.architecture().input_dim) {
    throw std::domain_error("qnetwork: state has " + std::to_string(state.size()) + " components, expected " +
                            std::to_string(net.architecture().input_dim));
  }
}

Activations run(const QNetwork& net, std::span<const double> state) {
  check_input(net, state);
  const auto& layers = net.layers();
  Activations acts;
  acts.pre.reserve(layers.size());
  acts.post.reserve(layers.size() + 1);
  acts.post.emplace_back(state.begin(), state.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    const std::vector<double>& in = acts.post.back();
    std::vector<double> z(layer.bias);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = &layer.weights[o * layer.inputs];
      double sum = 0.0;
      for (std::size_t i = 0; i < layer.inputs; ++i) sum += row[i] * in[i];
      z[o] += sum;
    }
    std::vector<double> a(z);
    if (l + 1 < layers.size()) {
      for (double& v : a) v = v > 0.0 ? v : 0.0;
    }
    acts.pre.push_back(std::move(z));
    acts.post.push_back(std::move(a));
  }
  return acts;
}

void expect_token(std::istream& in, const std::string& token) {
  std::string got;
  if (!(in >> got) || got != token) {
    throw std::runtime_error("qnetwork: malformed file, expected '" + token + "' but read '" + got + "'");
  }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw std::runtime_error(std::string("qnetwork: malformed file while reading ") + what);
  return v;
}

}  // namespace

void NetworkArchitecture::validate() const {
  if (input_dim == 0 || hidden_layers == 0 || hidden_width == 0 || output_dim == 0) {
    throw std::domain_error("network architecture: all dimensions must be >= 1");
  }
}

QNetwork::QNetwork(const NetworkArchitecture& arch) : arch_(arch) {
  arch_.validate();
  std::size_t fan_in = arch_.input_dim;
  for (std::size_t l = 0; l <= arch_.hidden_layers; ++l) {
    const std::size_t fan_out = l < arch_.hidden_layers ? arch_.hidden_width : arch_.output_dim;
    DenseLayer layer;
    layer.inputs = fan_in;
    layer.outputs = fan_out;
    layer.weights.assign(fan_in * fan_out, 0.0);
    layer.bias.assign(fan_out, 0.0);
    layers_.push_back(std::move(layer));
    fan_in = fan_out;
  }
}

std::size_t QNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

void QNetwork::write(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "arch " << arch_.input_dim << ' ' << arch_.hidden_layers << ' ' << arch_.hidden_width << ' '
      << arch_.output_dim << '\n';
  for (const auto& layer : layers_) {
    out << "layer " << layer.inputs << ' ' << layer.outputs << '\n';
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      if (i) out << ' ';
      out << format_double(layer.weights[i]);
    }
    out << '\n';
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      if (i) out << ' ';
      out << format_double(layer.bias[i]);
    }
    out << '\n';
  }
  out << "end\n";
}

QNetwork QNetwork::read(std::istream& in) {
  expect_token(in, kMagic);
  const int version = read_value<int>(in, "version");
  if (version != kFormatVersion) {
    throw std::runtime_error("qnetwork: unsupported format version " + std::to_string(version));
  }
  expect_token(in, "arch");
  NetworkArchitecture arch;
  arch.input_dim = read_value<std::size_t>(in, "input_dim");
  arch.hidden_layers = read_value<std::size_t>(in, "hidden_layers");
  arch.hidden_width = read_value<std::size_t>(in, "hidden_width");
  arch.output_dim = read_value<std::size_t>(in, "output_dim");
  QNetwork net(arch);
  for (auto& layer : net.layers_) {
    expect_token(in, "layer");
    const auto inputs = read_value<std::size_t>(in, "layer inputs");
    const auto outputs = read_value<std::size_t>(in, "layer outputs");
    if (inputs != layer.inputs || outputs != layer.outputs) {
      throw std::runtime_error("qnetwork: layer shape does not match the declared architecture");
    }
    for (double& w : layer.weights) w = read_value<double>(in, "weight");
    for (double& b : layer.bias) b = read_value<double>(in, "bias");
  }
  expect_token(in, "end");
  return net;
}

QNetwork init_network(const NetworkArchitecture& arch, std::uint64_t seed) {
  QNetwork net(arch);
  Rng rng(seed);
  for (auto& layer : net.layers()) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
  }
  return net;
}

std::vector<double> forward(const QNetwork& net, std::span<const double> state) {
  return std::move(run(net, state).post.back());
}

Gradient loss_gradient(const QNetwork& net, std::span<const double> state, std::size_t action, double target) {
  if (action >= net.architecture().output_dim) throw std::domain_error("qnetwork: action index out of range");
  if (!std::isfinite(target)) throw std::domain_error("qnetwork: non-finite target");
  const Activations acts = run(net, state);
  const auto& layers = net.layers();

  Gradient grad;
  grad.layers.resize(layers.size());
  const double error = acts.post.back()[action] - target;
  grad.loss = error * error;

  std::vector<double> delta(layers.back().outputs, 0.0);
  delta[action] = 2.0 * error;

  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = layers[l];
    const std::vector<double>& in = acts.post[l];
    DenseLayer& g = grad.layers[l];
    g.inputs = layer.inputs;
    g.outputs = layer.outputs;
    g.weights.assign(layer.weights.size(), 0.0);
    g.bias = delta;
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (delta[o] == 0.0) continue;
      double* row = &g.weights[o * layer.inputs];
      for (std::size_t i = 0; i < layer.inputs; ++i) row[i] = delta[o] * in[i];
    }
    if (l == 0) break;
    std::vector<double> upstream(layer.inputs, 0.0);
    const std::vector<double>& pre = acts.pre[l - 1];
    for (std::size_t i = 0; i < layer.inputs; ++i) {
      if (pre[i] <= 0.0) continue;
      double sum = 0.0;
      for (std::size_t o = 0; o < layer.outputs; ++o) sum += layer.weight(o, i) * delta[o];
      upstream[i] = sum;
    }
    delta = std::move(upstream);
  }
  return grad;
}

double sgd_step(QNetwork& net, std::span<const double> state, std::size_t action, double target, double lr) {
  if (!(lr > 0)) throw std::domain_error("sgd_step: learning rate must be > 0");
  const Gradient grad = loss_gradient(net, state, action, target);
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& layer = layers[l];
    const auto& g = grad.layers[l];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) layer.weights[i] -= lr * g.weights[i];
    for (std::size_t i = 0; i < layer.bias.size(); ++i) layer.bias[i] -= lr * g.bias[i];
  }
  return grad.loss;
}

}  // namespace fogdist
