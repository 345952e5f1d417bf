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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fogdist/agent.hpp"
#include "fogdist/profile.hpp"

using namespace fogdist;

namespace {

Transition make_transition(double reward, int action = 0) {
  Transition t;
  t.state = StateVector(19, 0.0);
  t.state[0] = reward;
  t.action = action;
  t.reward = reward;
  t.next_state = StateVector(19, 0.0);
  return t;
}

ApplicationProfile toy_profile() {
  ApplicationProfile p;
  p.name = "toy";
  p.raw_request_bytes = 1000;
  p.requests_per_deployment = 5;
  p.uplink_seconds_per_raw_unit = 1.0;
  p.modules = {
      {"a", 0.01, 0.0, 0.5, 1.0, {1.0, 0.25, 0.0}},
      {"b", 0.01, 0.0, 0.1, 1.0, {1.0, 0.25, 0.0}},
  };
  return p;
}

}  // namespace

TEST_CASE("epsilon decays geometrically to its floor") {
  EpsilonSchedule s;
  CHECK(s.epsilon() == 1.0);
  s = decay_epsilon(s);
  CHECK(s.epsilon() == 0.99);
  for (int t = 1; t < 600; ++t) {
    CHECK(s.epsilon() == std::max(0.01, std::pow(0.99, static_cast<double>(t))));
    s = decay_epsilon(s);
  }
  EpsilonSchedule floor;
  floor.epsilon_start = 0.01;
  CHECK(decay_epsilon(floor).epsilon() == 0.01);
}

TEST_CASE("459 decays reach the floor") {
  EpsilonSchedule s;
  for (int t = 0; t < 458; ++t) s = decay_epsilon(s);
  CHECK(s.epsilon() > 0.01);
  s = decay_epsilon(s);
  CHECK(s.epsilon() == 0.01);
  CHECK(s.steps == 459);
  s = decay_epsilon(s);
  CHECK(s.steps == 459);
}

TEST_CASE("replay memory is a bounded FIFO") {
  ReplayMemory m(5);
  for (int i = 0; i < 5; ++i) {
    remember(m, make_transition(i));
    CHECK(m.size() == static_cast<std::size_t>(i + 1));
  }
  remember(m, make_transition(5));
  CHECK(m.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(m[i].reward == static_cast<double>(i + 1));
}

TEST_CASE("minibatch draws are distinct and cover the memory uniformly") {
  ReplayMemory m(10);
  for (int i = 0; i < 10; ++i) remember(m, make_transition(i));
  Rng rng(1);
  std::vector<int> counts(10, 0);
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    auto batch = m.sample(3, rng);
    CHECK(batch.size() == 3);
    std::sort(batch.begin(), batch.end());
    CHECK(std::adjacent_find(batch.begin(), batch.end()) == batch.end());
    for (const Transition* t : batch) ++counts[static_cast<std::size_t>(t->reward)];
  }
  const double p = 0.3, expected = draws * p, sd = std::sqrt(draws * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - expected) < 4 * sd);
  CHECK_THROWS(m.sample(11, rng));
}

TEST_CASE("static plans ignore the state") {
  Rng rng(0);
  CHECK(select_k(StaticPlan{2}, StateVector(19, 0.3), rng) == 2);
}

TEST_CASE("greedy action breaks ties towards the lowest index") {
  CHECK(greedy_action(std::vector<double>{-1, 3, 3, 0}) == 1);
  CHECK_THROWS_AS(greedy_action(std::vector<double>{}), std::domain_error);
}

TEST_CASE("greedy selection reads the online network") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 1);
  agent.freeze();
  auto& out = agent.online().layers().back();
  std::fill(out.weights.begin(), out.weights.end(), 0.0);
  out.bias = {-1, 3, 3, 0};
  Rng rng(0);
  CHECK(select_k(std::ref(agent), StateVector(19, 0.5), rng) == 1);
}

TEST_CASE("full exploration is uniform over plans") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 1);
  REQUIRE(agent.exploration_rate() == 1.0);
  Rng rng(5);
  std::vector<int> counts(4, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[select_k(std::ref(agent), StateVector(19, 0.5), rng)];
  const double sd = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - n / 4.0) < 4 * sd);
}

TEST_CASE("bootstrapped targets") {
  AgentConfig cfg;
  NetworkArchitecture arch;
  QNetwork target(arch);
  std::fill(target.layers().back().bias.begin(), target.layers().back().bias.end(), -1.0);

  Transition t = make_transition(-0.5);
  t.terminal = true;
  CHECK(compute_target(cfg, target, t) == -0.5);
  t.terminal = false;
  CHECK(compute_target(cfg, target, t) == doctest::Approx(-1.45).epsilon(1e-15));
  cfg.gamma = 0.0;
  CHECK(compute_target(cfg, target, t) == -0.5);
}

TEST_CASE("replay waits for more than a batch") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 2);
  const QNetwork before = agent.online();
  for (int i = 0; i < 5; ++i) remember(agent.memory(), make_transition(-1.0, i % 4));
  CHECK_FALSE(replay(agent).has_value());
  CHECK(agent.online() == before);
  remember(agent.memory(), make_transition(-1.0));
  CHECK(replay(agent).has_value());
  CHECK_FALSE(agent.online() == before);
  CHECK(agent.target() == agent.online());
}

TEST_CASE("replay on a transition already fitted changes nothing") {
  AgentConfig cfg;
  cfg.batch_size = 1;
  DistributionAgent agent(cfg, 3, 3);
  Transition t = make_transition(0.0, 2);
  t.terminal = true;
  t.reward = forward(agent.online(), t.state)[2];
  remember(agent.memory(), t);
  remember(agent.memory(), t);
  const QNetwork before = agent.online();
  CHECK(*replay(agent) == 0.0);
  CHECK(agent.online() == before);
}

TEST_CASE("seeded replay is repeatable") {
  auto run = [] {
    AgentConfig cfg;
    DistributionAgent agent(cfg, 3, 4);
    for (int i = 0; i < 30; ++i) remember(agent.memory(), make_transition(-0.1 * i, i % 4));
    for (int i = 0; i < 10; ++i) replay(agent);
    return agent.online();
  };
  CHECK(run() == run());
}

TEST_CASE("static episode on a steady node repeats its utility") {
  FogEnvironment env(builtin_profiles().first, EnvironmentConfig::unstressed(), 0);
  EpisodeOptions opt;
  const EpisodeResult r = run_episode(env, StaticPlan{0}, opt);
  REQUIRE(r.steps.size() == 20);
  double sum = 0;
  for (const auto& s : r.steps) {
    CHECK(s.utility == r.steps.front().utility);
    sum += s.utility;
  }
  CHECK(r.reward == doctest::Approx(sum).epsilon(1e-15));
  // 2.3 s per frame; 46 s of one VM.
  const double cost = 0.0132 * 46.0 / 3600.0;
  CHECK(r.steps.front().utility == doctest::Approx(-2.3 - cost).epsilon(1e-12));
}

TEST_CASE("seeded learning episodes are repeatable") {
  auto run = [] {
    AgentConfig cfg;
    DistributionAgent agent(cfg, 3, 8);
    EnvironmentConfig env_cfg;
    FogEnvironment env(builtin_profiles().first, env_cfg, 8);
    EpisodeOptions opt;
    return run_episode(env, std::ref(agent), opt).reward;
  };
  CHECK(run() == run());
}

TEST_CASE("learning fills memory and decays exploration") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 1);
  FogEnvironment env(builtin_profiles().first, EnvironmentConfig{}, 1);
  EpisodeOptions opt;
  run_episode(env, std::ref(agent), opt);
  CHECK(agent.memory().size() == 20);
  CHECK(agent.schedule().steps == 20);
  CHECK(agent.memory()[19].terminal);
  CHECK_FALSE(agent.memory()[18].terminal);
  CHECK(agent.memory()[0].next_state == agent.memory()[1].state);
}

TEST_CASE("literal state carry stores the current state as the next state") {
  AgentConfig cfg;
  cfg.literal_state_carry = true;
  DistributionAgent agent(cfg, 3, 1);
  FogEnvironment env(builtin_profiles().first, EnvironmentConfig{}, 1);
  EpisodeOptions opt;
  opt.deployments = 3;
  run_episode(env, std::ref(agent), opt);
  for (std::size_t i = 0; i < 3; ++i) CHECK(agent.memory()[i].next_state == agent.memory()[0].state);
}

TEST_CASE("frozen agents do not learn") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 1);
  agent.freeze();
  FogEnvironment env(builtin_profiles().first, EnvironmentConfig{}, 1);
  EpisodeOptions opt;
  run_episode(env, std::ref(agent), opt);
  CHECK(agent.memory().size() == 0);
  CHECK(agent.exploration_rate() == 0.0);
}

TEST_CASE("training returns one reward per episode") {
  AgentConfig cfg;
  DistributionAgent agent(cfg, 3, 1);
  TrainingOptions opt;
  opt.episodes = 1;
  CHECK(train(builtin_profiles().first, agent, opt).size() == 1);
}

TEST_CASE("myopic cost-only agent learns the cheapest plan") {
  const ApplicationProfile toy = toy_profile();
  PricingModel pricing;
  pricing.lambda = 0.01;

  // Exhaustive oracle over the plans.
  std::vector<double> cost(3);
  for (int k = 0; k <= 2; ++k) {
    FogEnvironment env(toy, EnvironmentConfig::unstressed(), 0);
    const auto r = env.execute_deployment(k);
    cost[static_cast<std::size_t>(k)] =
        deployment_cost(k, 2, pricing, r.outcome.usage, seconds_to_hours(r.outcome.t_seconds));
  }
  const int cheapest = static_cast<int>(std::min_element(cost.begin(), cost.end()) - cost.begin());

  AgentConfig cfg;
  cfg.gamma = 0.0;
  cfg.weights = {0.0, -1.0};
  cfg.lr = 0.005;
  cfg.reward_scale = 1.0 / *std::max_element(cost.begin(), cost.end());
  DistributionAgent agent(cfg, 2, 6);
  TrainingOptions opt;
  opt.episodes = 150;
  opt.pricing = pricing;
  opt.environment = EnvironmentConfig::unstressed();
  train(toy, agent, opt);

  agent.freeze();
  FogEnvironment env(toy, EnvironmentConfig::unstressed(), 123);
  EpisodeOptions eval;
  eval.pricing = pricing;
  eval.weights = cfg.weights;
  for (const auto& step : run_episode(env, std::ref(agent), eval).steps) CHECK(step.k == cheapest);
}

TEST_CASE("checkpoint round trip") {
  AgentConfig cfg;
  cfg.lr = 0.0025;
  DistributionAgent agent(cfg, 3, 9);
  for (int i = 0; i < 7; ++i) agent.schedule() = decay_epsilon(agent.schedule());
  std::stringstream buf;
  agent.save(buf);
  const DistributionAgent back = DistributionAgent::load(buf);
  CHECK(back.online() == agent.online());
  CHECK(back.target() == agent.target());
  CHECK(back.n_actions() == 4);
  CHECK(back.config().lr == 0.0025);
  CHECK(back.schedule().steps == 7);

  std::stringstream bad("not-a-checkpoint 1\n");
  CHECK_THROWS(DistributionAgent::load(bad));
}

TEST_CASE("agent config validation") {
  AgentConfig cfg;
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AgentConfig{};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AgentConfig{};
  cfg.schedule.decay = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
