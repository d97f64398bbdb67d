#include <doctest.h>

#include <algorithm>
#include <random>

#include "mixann/error.hpp"
#include "mixann/trainer.hpp"
#include "stubs.hpp"

using namespace mixann;

namespace {

Dataset small_toy(std::uint64_t seed = 3) {
  ToySpec spec;
  spec.majority_count = 60;
  spec.minority_count = 15;
  spec.seed = seed;
  return make_toy(spec);
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.episodes = 4;
  cfg.env.T_max = 6;
  cfg.agent.batch_size = 8;
  cfg.agent.hidden = {16, 16};
  cfg.rollouts = 2;
  cfg.seeds = {0, 1};
  return cfg;
}

// Zero actor whose raw epsilon output is fixed at `eps_raw`.
std::function<void(DdpgAgent&)> fixed_actor(double eps_raw) {
  return [eps_raw](DdpgAgent& agent) {
    agent.actor().zero();
    agent.actor().params()[agent.actor().param_count() - 1] = eps_raw;
    agent.sync_targets();
  };
}

double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - xs[i]));
    d = std::max(d, std::abs(xs[i] - i / n));
  }
  return d;
}

}  // namespace

TEST_SUITE("trainer") {
  TEST_CASE("reward shaping per mode") {
    std::mt19937_64 rng(1);
    StepDiagnostics d{0.02, 0.25, 0.8};
    CHECK(shaped_reward(RewardMode::Full, d, 10.0, rng) == 10.0 * 0.02 * 0.25);
    CHECK(shaped_reward(RewardMode::NoImprovement, d, 10.0, rng) == 10.0 * 0.8 * 0.25);
    CHECK(shaped_reward(RewardMode::NoExploration, d, 10.0, rng) == 10.0 * 0.02);
    const double r = shaped_reward(RewardMode::Random, d, 10.0, rng);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    for (auto m : {RewardMode::Full, RewardMode::Random, RewardMode::NoImprovement, RewardMode::NoExploration})
      CHECK(reward_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(reward_mode_from_string("greedy"), Error);
  }

  TEST_CASE("random rewards pass a uniformity check") {
    std::mt19937_64 rng(2);
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(shaped_reward(RewardMode::Random, {}, 10.0, rng));
    // 1% critical value of the one-sample KS statistic.
    CHECK(ks_uniform(xs) < 1.63 / std::sqrt(10000.0));
  }

  TEST_CASE("noise decays linearly") {
    AgentConfig a;
    CHECK(noise_for_episode(a, 0, 100) == 0.1);
    CHECK(noise_for_episode(a, 99, 100) == doctest::Approx(0.01));
    CHECK(noise_for_episode(a, 1, 1) == 0.1);
  }

  TEST_CASE("terminating actor takes one step per episode") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.episodes = 1;
    PolicyTrainer t(cfg, d, d, 0);
    t.set_agent_init(fixed_actor(20.0));
    auto policy = t.run();
    CHECK(policy.trace.steps.size() == 1);
    CHECK(policy.trace.episode_lengths == std::vector<int>{1});
  }

  TEST_CASE("no-exploration first reward reduces to lambda times the score gain") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.episodes = 1;
    cfg.reward_mode = RewardMode::NoExploration;
    PolicyTrainer t(cfg, d, d, 0);
    t.set_pretrained(stub::constant(2, 0.5));
    t.set_scorer(stub::scripted({0.6, 0.7}));  // baseline first, then frozen
    auto policy = t.run();
    CHECK(policy.baseline0 == 0.6);
    CHECK(policy.trace.steps.front().reward == doctest::Approx(10.0 * (0.7 - 0.6)).epsilon(1e-12));
  }

  TEST_CASE("same seed gives identical traces") {
    Dataset d = small_toy();
    auto a = train_policy(quick_config(), d, d, 5);
    auto b = train_policy(quick_config(), d, d, 5);
    REQUIRE(a.trace.steps.size() == b.trace.steps.size());
    for (std::size_t i = 0; i < a.trace.steps.size(); ++i) {
      CHECK(a.trace.steps[i].raw == b.trace.steps[i].raw);
      CHECK(a.trace.steps[i].reward == b.trace.steps[i].reward);
    }
    CHECK(a.agent.actor() == b.agent.actor());
  }

  TEST_CASE("episodes start from the pretrained snapshot") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.episodes = 6;
    PolicyTrainer t(cfg, d, d, 1);
    std::vector<std::uint64_t> digests;
    t.on_episode_start([&](int, const Classifier& c) { digests.push_back(c.digest()); });
    auto policy = t.run();
    REQUIRE(digests.size() == 6);
    for (auto dg : digests) CHECK(dg == policy.pretrained->digest());
  }

  TEST_CASE("persisted classifier carries state across episodes") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.persist_classifier = true;
    PolicyTrainer t(cfg, d, d, 1);
    std::vector<std::size_t> pools;
    t.on_episode_start([&](int, const Classifier& c) { pools.push_back(c.pool_size()); });
    t.run();
    CHECK(pools.back() > pools.front());
  }

  TEST_CASE("agent updates only once the buffer holds a batch") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.episodes = 5;
    auto policy = train_policy(cfg, d, d, 2);
    const auto steps = policy.trace.steps.size();
    if (steps >= 8) {
      CHECK(policy.trace.buffer_at_first_update == 8);
      CHECK(policy.trace.agent_updates == static_cast<std::int64_t>(steps - 7));
    } else {
      CHECK(policy.trace.agent_updates == 0);
    }
  }

  TEST_CASE("random mode stores rewards in [0, 1)") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.reward_mode = RewardMode::Random;
    auto policy = train_policy(cfg, d, d, 3);
    for (const auto& s : policy.trace.steps) {
      CHECK(s.reward >= 0.0);
      CHECK(s.reward < 1.0);
    }
  }

  TEST_CASE("final rollout") {
    Dataset d = small_toy();
    auto cfg = quick_config();
    cfg.rollouts = 3;
    AgentConfig ac;
    DdpgAgent agent(4, ac, ActionBounds::for_env(cfg.env));
    fixed_actor(20.0)(agent);
    auto pre = stub::constant(2, 0.5);
    auto scorer = stub::scripted({0.5});
    auto r = final_rollout(agent, d, scorer, cfg, *pre, 0.5, 7);
    CHECK(r.episode_lengths == std::vector<int>{1, 1, 1});
    // Zero actor: n = round(5 * 0.5) = 3 copies per burst.
    CHECK(r.synthetics.size() == 9);
    auto again = final_rollout(agent, d, scorer, cfg, *pre, 0.5, 7);
    CHECK(again.synthetics == r.synthetics);
    for (const auto& s : r.synthetics) {
      CHECK((s.label == 0 || s.label == 1));
      CHECK(s.features.size() == 2);
    }
  }

  TEST_CASE("experiment aggregates are per-seed means") {
    Dataset d = small_toy(4);
    ExperimentConfig ec;
    ec.train = quick_config();
    ec.train.seeds = {0, 1, 2};
    ec.oversample.n_synthetic = 20;
    for (auto m : {Method::None, Method::Smote, Method::Mixann}) {
      auto rep = run_experiment(ec, d, m, 2);
      REQUIRE(rep.per_seed.size() == 3);
      double f1 = 0;
      for (const auto& s : rep.per_seed) f1 += s.scores.f1;
      CHECK(std::abs(rep.mean.f1 - f1 / 3.0) <= 1e-12);
      if (m == Method::Smote) CHECK(rep.total_synthetics == 60);
      if (m == Method::None) CHECK(rep.total_synthetics == 0);
    }
    auto serial = run_experiment(ec, d, Method::Mixann, 1);
    auto parallel = run_experiment(ec, d, Method::Mixann, 3);
    CHECK(serial.mean.f1 == parallel.mean.f1);
  }

  TEST_CASE("oversampling methods need a positive request") {
    Dataset d = small_toy();
    ExperimentConfig ec;
    ec.train = quick_config();
    ec.oversample.n_synthetic = 0;
    try {
      run_seed(ec, d, Method::Random, 0);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
    CHECK_NOTHROW(run_seed(ec, d, Method::None, 0));
  }

  TEST_CASE("method names") {
    for (auto m : {Method::None, Method::Random, Method::Smote, Method::BorderlineSmote, Method::Adasyn,
                   Method::Mixboost, Method::Mixann})
      CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("svmsmote"), Error);
  }
}
