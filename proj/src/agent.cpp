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

#include "fogdist/agent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fogdist/config.hpp"

namespace fogdist {

namespace {

constexpr const char* kCheckpointMagic = "fogdist-agent";
constexpr int kCheckpointVersion = 1;

NetworkArchitecture architecture_for(const AgentConfig& config, int n_modules) {
  NetworkArchitecture arch;
  arch.input_dim = FogNodeState::kFactors;
  arch.hidden_layers = config.hidden_layers;
  arch.hidden_width = config.hidden_width;
  arch.output_dim = static_cast<std::size_t>(n_modules) + 1;
  return arch;
}

}  // namespace

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay memory: capacity must be >= 1");
}

void ReplayMemory::remember(Transition t) {
  buffer_.push_back(std::move(t));
  while (buffer_.size() > capacity_) buffer_.pop_front();
}

std::vector<const Transition*> ReplayMemory::sample(std::size_t count, Rng& rng) const {
  if (count > buffer_.size()) throw std::logic_error("replay memory: batch larger than memory");
  // Partial Fisher-Yates over the indices.
  std::vector<std::size_t> index(buffer_.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::vector<const Transition*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.index(index.size() - i);
    std::swap(index[i], index[j]);
    out.push_back(&buffer_[index[i]]);
  }
  return out;
}

double EpsilonSchedule::epsilon() const {
  return std::max(epsilon_min, epsilon_start * std::pow(decay, static_cast<double>(steps)));
}

void EpsilonSchedule::validate() const {
  if (!(epsilon_min >= 0 && epsilon_min <= epsilon_start && epsilon_start <= 1)) {
    throw std::invalid_argument("epsilon schedule: need 0 <= epsilon_min <= epsilon <= 1");
  }
  if (!(decay > 0 && decay <= 1)) throw std::invalid_argument("epsilon schedule: decay must lie in (0, 1]");
  if (steps < 0) throw std::invalid_argument("epsilon schedule: negative decay count");
}

EpsilonSchedule decay_epsilon(EpsilonSchedule schedule) {
  if (schedule.epsilon() > schedule.epsilon_min) ++schedule.steps;
  return schedule;
}

void AgentConfig::validate() const {
  if (!(gamma >= 0 && gamma < 1)) throw std::invalid_argument("agent.gamma: must lie in [0, 1)");
  if (batch_size < 1) throw std::invalid_argument("agent.batch_size: must be >= 1");
  if (!(lr > 0)) throw std::invalid_argument("agent.lr: must be > 0");
  if (replay_capacity < 1) throw std::invalid_argument("agent.replay_capacity: must be >= 1");
  if (hidden_layers < 1 || hidden_width < 1) throw std::invalid_argument("agent: hidden layers must be non-empty");
  if (!(reward_scale > 0) || !std::isfinite(reward_scale)) {
    throw std::invalid_argument("agent.reward_scale: must be finite and > 0");
  }
  schedule.validate();
  weights.validate();
}

DistributionAgent::DistributionAgent(AgentConfig config, int n_modules, std::uint64_t seed)
    : config_(std::move(config)),
      n_actions_(n_modules + 1),
      online_(init_network(architecture_for(config_, n_modules), derive_seed(seed, Stream::kAgentInit))),
      target_(clone_into_target(online_)),
      memory_(config_.replay_capacity),
      rng_(derive_seed(seed, Stream::kAgentPolicy)) {
  config_.validate();
  if (n_modules < 1) throw std::invalid_argument("agent: application needs at least one module");
}

void DistributionAgent::save(std::ostream& out) const {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << agent_config_to_json(config_).dump() << '\n';
  out << "n_modules " << (n_actions_ - 1) << '\n';
  online_.write(out);
  target_.write(out);
}

DistributionAgent DistributionAgent::load(std::istream& in, std::uint64_t seed) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) {
    throw std::runtime_error("checkpoint: not a fogdist agent checkpoint");
  }
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  std::string line;
  std::getline(in, line);  // rest of the header line
  std::getline(in, line);
  AgentConfig config;
  try {
    config = agent_config_from_json(nlohmann::json::parse(line), "agent");
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("checkpoint: bad config line: ") + e.what());
  }
  std::string key;
  int n_modules = 0;
  if (!(in >> key >> n_modules) || key != "n_modules") throw std::runtime_error("checkpoint: missing n_modules");

  DistributionAgent agent(config, n_modules, seed);
  agent.online_ = QNetwork::read(in);
  agent.target_ = QNetwork::read(in);
  if (agent.online_.architecture() != architecture_for(config, n_modules) ||
      agent.target_.architecture() != agent.online_.architecture()) {
    throw std::runtime_error("checkpoint: network shape does not match its configuration");
  }
  return agent;
}

int greedy_action(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("greedy_action: no action values");
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

int select_k(const Strategy& strategy, const StateVector& state, Rng& rng) {
  if (const auto* plan = std::get_if<StaticPlan>(&strategy)) return plan->k;
  const DistributionAgent& agent = std::get<std::reference_wrapper<DistributionAgent>>(strategy).get();
  const double epsilon = agent.exploration_rate();
  if (epsilon > 0 && rng.uniform() < epsilon) {
    return static_cast<int>(rng.index(static_cast<std::size_t>(agent.n_actions())));
  }
  return greedy_action(forward(agent.online(), state));
}

void remember(ReplayMemory& memory, Transition t) { memory.remember(std::move(t)); }

double compute_target(const AgentConfig& config, const QNetwork& target_net, const Transition& t) {
  if (t.terminal) return t.reward;
  const auto next_values = forward(target_net, t.next_state);
  return t.reward + config.gamma * *std::max_element(next_values.begin(), next_values.end());
}

std::optional<double> replay(DistributionAgent& agent) {
  const AgentConfig& config = agent.config();
  if (agent.memory().size() <= config.batch_size) return std::nullopt;
  const auto batch = agent.memory().sample(config.batch_size, agent.rng());
  double loss = 0.0;
  for (const Transition* t : batch) {
    const double y = compute_target(config, agent.target(), *t);
    loss += sgd_step(agent.online(), t->state, static_cast<std::size_t>(t->action), y, config.lr);
  }
  if (config.target_sync) agent.target() = clone_into_target(agent.online());
  return loss / static_cast<double>(batch.size());
}

EpisodeResult run_episode(FogEnvironment& env, const Strategy& strategy, const EpisodeOptions& options) {
  if (options.deployments < 1) throw std::invalid_argument("run_episode: need at least one deployment");
  DistributionAgent* agent = nullptr;
  if (auto* ref = std::get_if<std::reference_wrapper<DistributionAgent>>(&strategy)) agent = &ref->get();
  const bool learning = agent != nullptr && options.learn && !agent->frozen();
  const bool literal = agent != nullptr && agent->config().literal_state_carry;
  const int n = env.profile().n_modules();

  Rng unused_rng(0);
  Rng& rng = agent != nullptr ? agent->rng() : unused_rng;

  EpisodeResult result;
  result.steps.reserve(static_cast<std::size_t>(options.deployments));
  std::vector<double> utilities;
  utilities.reserve(static_cast<std::size_t>(options.deployments));

  StateVector state = env.observe_normalised();
  for (int j = 0; j < options.deployments; ++j) {
    const auto started = std::chrono::steady_clock::now();
    const int k = select_k(strategy, state, rng);
    const auto finished = std::chrono::steady_clock::now();

    DeploymentRecord record = env.execute_deployment(k);
    if (options.time_decisions) {
      record.outcome.decision_latency_ms = std::chrono::duration<double, std::milli>(finished - started).count();
    }
    DeploymentStep step;
    step.k = k;
    step.cost = deployment_cost(k, n, options.pricing, record.outcome.usage,
                                seconds_to_hours(record.outcome.t_seconds));
    step.utility = deployment_utility(options.weights, record.outcome, step.cost);
    step.outcome = record.outcome;

    StateVector next_state = env.observe_normalised();
    if (learning) {
      Transition t;
      t.state = state;
      t.action = k;
      t.reward = step.utility * agent->config().reward_scale;
      t.next_state = literal ? state : next_state;
      t.terminal = j + 1 == options.deployments;
      remember(agent->memory(), std::move(t));
      replay(*agent);
      agent->schedule() = decay_epsilon(agent->schedule());
    }
    if (!literal) state = std::move(next_state);

    utilities.push_back(step.utility);
    result.steps.push_back(std::move(step));
  }
  result.reward = strategy_utility(utilities);
  return result;
}

std::vector<double> train(const ApplicationProfile& profile, DistributionAgent& agent,
                          const TrainingOptions& options) {
  if (options.episodes < 1) throw std::invalid_argument("train: need at least one episode");
  EpisodeOptions episode;
  episode.deployments = options.deployments;
  episode.pricing = options.pricing;
  episode.weights = agent.config().weights;
  episode.learn = true;

  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(options.episodes));
  for (int i = 0; i < options.episodes; ++i) {
    FogEnvironment env(profile, options.environment,
                       derive_seed(options.master_seed, Stream::kTrainEpisode, static_cast<std::uint64_t>(i)));
    curve.push_back(run_episode(env, std::ref(agent), episode).reward);
  }
  return curve;
}

}  // namespace fogdist
