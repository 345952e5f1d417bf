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
#include <deque>
#include <functional>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "fogdist/environment.hpp"
#include "fogdist/model.hpp"
#include "fogdist/qnetwork.hpp"
#include "fogdist/random.hpp"

namespace fogdist {

struct Transition {
  StateVector state;
  int action = 0;
  double reward = 0.0;
  StateVector next_state;
  bool terminal = false;
};

// Bounded FIFO; the oldest transition is evicted first.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity = 2000);

  void remember(Transition t);

  // `count` distinct transitions, uniformly without replacement.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

  std::size_t size() const { return buffer_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return buffer_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> buffer_;
};

/*
 * Exploration rate after t decays is max(epsilon_min, epsilon_start * decay^t).
 * The decay count is what is stored, so the value matches the closed form
 * exactly instead of accumulating rounding from repeated multiplication.
 */
struct EpsilonSchedule {
  double epsilon_start = 1.0;
  double epsilon_min = 0.01;
  double decay = 0.99;
  long steps = 0;

  double epsilon() const;
  void validate() const;
};

// Multiplies by `decay` while above the floor.
EpsilonSchedule decay_epsilon(EpsilonSchedule schedule);

struct AgentConfig {
  double gamma = 0.95;
  std::size_t batch_size = 5;
  EpsilonSchedule schedule;
  double lr = 0.001;
  UtilityWeights weights;
  std::size_t replay_capacity = 2000;
  std::size_t hidden_layers = 2;
  std::size_t hidden_width = 24;
  // Copy the online network into the target network after every replay.
  bool target_sync = true;
  // Read "s_{j+1} = s_j" literally: the stored next state is the current
  // state and the observation is never refreshed within an episode.
  bool literal_state_carry = false;
  // Utilities are multiplied by this before they reach the learner.
  double reward_scale = 1.0;

  void validate() const;
};

/*
 * The learning Distribution Manager: value network, its target copy, replay
 * memory and exploration schedule. Owns its random stream; copies are fully
 * independent.
 */
class DistributionAgent {
 public:
  DistributionAgent(AgentConfig config, int n_modules, std::uint64_t seed);

  const AgentConfig& config() const { return config_; }
  AgentConfig& config() { return config_; }
  int n_actions() const { return n_actions_; }

  QNetwork& online() { return online_; }
  const QNetwork& online() const { return online_; }
  QNetwork& target() { return target_; }
  const QNetwork& target() const { return target_; }
  ReplayMemory& memory() { return memory_; }
  const ReplayMemory& memory() const { return memory_; }
  EpsilonSchedule& schedule() { return config_.schedule; }
  const EpsilonSchedule& schedule() const { return config_.schedule; }
  Rng& rng() { return rng_; }

  // Greedy evaluation: exploration forced to zero from now on.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  double exploration_rate() const { return frozen_ ? 0.0 : config_.schedule.epsilon(); }

  /*
   * Checkpoint layout (text):
   *   fogdist-agent 1
   *   <AgentConfig as one JSON line, including the schedule's decay count>
   *   n_modules <N>
   *   <online network in the fogdist-qnet layout>
   *   <target network in the fogdist-qnet layout>
   * Replay memory and the random stream are not persisted.
   */
  void save(std::ostream& out) const;
  static DistributionAgent load(std::istream& in, std::uint64_t seed = 0);

 private:
  AgentConfig config_;
  int n_actions_;
  QNetwork online_;
  QNetwork target_;
  ReplayMemory memory_;
  Rng rng_;
  bool frozen_ = false;
};

struct StaticPlan {
  int k = 0;
};

using Strategy = std::variant<StaticPlan, std::reference_wrapper<DistributionAgent>>;

// Lowest index among the maxima.
int greedy_action(std::span<const double> values);

// Static plans return their k; the agent explores with its current rate and
// otherwise acts greedily.
int select_k(const Strategy& strategy, const StateVector& state, Rng& rng);

void remember(ReplayMemory& memory, Transition t);

// y = U for terminal transitions, else U + gamma * max_k' Q_target(s', k').
double compute_target(const AgentConfig& config, const QNetwork& target_net, const Transition& t);

// One minibatch of SGD against bootstrapped targets. nullopt (and no change)
// while the memory holds batch_size transitions or fewer.
std::optional<double> replay(DistributionAgent& agent);

struct DeploymentStep {
  int k = 0;
  DeploymentOutcome outcome;
  double cost = 0.0;
  double utility = 0.0;
};

struct EpisodeResult {
  double reward = 0.0;
  std::vector<DeploymentStep> steps;
};

struct EpisodeOptions {
  int deployments = 20;
  PricingModel pricing;
  UtilityWeights weights;
  bool learn = true;            // store, replay and decay (context-aware only)
  bool time_decisions = false;  // fill decision_latency_ms with wall-clock time
};

EpisodeResult run_episode(FogEnvironment& env, const Strategy& strategy, const EpisodeOptions& options);

struct TrainingOptions {
  int episodes = 600;
  int deployments = 20;
  PricingModel pricing;
  EnvironmentConfig environment;
  std::uint64_t master_seed = 0;
};

// Learning curve: one episode reward per episode. Episode i runs in a fresh
// environment seeded from (master_seed, i).
std::vector<double> train(const ApplicationProfile& profile, DistributionAgent& agent,
                          const TrainingOptions& options);

}  // namespace fogdist
