#include "mixann/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "mixann/error.hpp"

namespace mixann {

std::string to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::Full: return "full";
    case RewardMode::Random: return "random";
    case RewardMode::NoImprovement: return "no_improvement";
    case RewardMode::NoExploration: return "no_exploration";
  }
  return "full";
}

RewardMode reward_mode_from_string(const std::string& name) {
  if (name == "full") return RewardMode::Full;
  if (name == "random") return RewardMode::Random;
  if (name == "no_improvement") return RewardMode::NoImprovement;
  if (name == "no_exploration") return RewardMode::NoExploration;
  throw Error(ErrorCode::InvalidConfig, "unknown reward_mode '" + name + "'");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::None: return "none";
    case Method::Random: return "random";
    case Method::Smote: return "smote";
    case Method::BorderlineSmote: return "borderline_smote";
    case Method::Adasyn: return "adasyn";
    case Method::Mixboost: return "mixboost";
    case Method::Mixann: return "mixann";
  }
  return "none";
}

Method method_from_string(const std::string& name) {
  for (auto m : {Method::None, Method::Random, Method::Smote, Method::BorderlineSmote, Method::Adasyn,
                 Method::Mixboost, Method::Mixann}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

void TrainConfig::validate() const {
  env.validate();
  agent.validate();
  classifier.validate();
  if (episodes < 1) throw Error(ErrorCode::InvalidConfig, "episodes must be >= 1");
  if (seeds.empty()) throw Error(ErrorCode::InvalidConfig, "seeds must not be empty");
  if (rollouts < 1) throw Error(ErrorCode::InvalidConfig, "rollouts must be >= 1");
}

double shaped_reward(RewardMode mode, const StepDiagnostics& diag, double lambda, std::mt19937_64& rng) {
  switch (mode) {
    case RewardMode::Full: return lambda * diag.delta_m * diag.confidence;
    case RewardMode::Random: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case RewardMode::NoImprovement: return lambda * diag.val_score * diag.confidence;
    case RewardMode::NoExploration: return lambda * diag.delta_m;
  }
  return 0.0;
}

double noise_for_episode(const AgentConfig& cfg, int episode, int episodes) {
  if (episodes <= 1) return cfg.noise_sigma;
  const double t = static_cast<double>(episode) / static_cast<double>(episodes - 1);
  return cfg.noise_sigma + (cfg.noise_sigma_final - cfg.noise_sigma) * t;
}

namespace {

// Independent generator per (seed, purpose).
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

enum Stream : std::uint64_t { kEnvStream = 1, kAgentStream = 2, kRolloutStream = 3 };

}  // namespace

PolicyTrainer::PolicyTrainer(TrainConfig cfg, const Dataset& train, const Dataset& val, std::uint64_t seed)
    : cfg_(std::move(cfg)), train_(train), val_(val), seed_(seed) {
  cfg_.validate();
  if (train_.dim() != val_.dim()) throw Error(ErrorCode::DimensionMismatch, "train and val dimensions differ");
  if (!train_.has_both_classes()) throw Error(ErrorCode::SingleClassData, "training split needs both classes");
}

TrainedPolicy PolicyTrainer::run() {
  if (!scorer_) scorer_ = macro_f1_scorer(val_);
  if (!pretrained_) {
    ClassifierSpec spec = cfg_.classifier;
    spec.seed = seed_;
    pretrained_ = fit(spec, train_);
  }
  const double baseline0 = scorer_(*pretrained_);

  AgentConfig agent_cfg = cfg_.agent;
  agent_cfg.seed = seed_;
  DdpgAgent agent(2 * train_.dim(), agent_cfg, ActionBounds::for_env(cfg_.env));
  if (agent_init_) agent_init_(agent);

  MixupEnv env(train_, scorer_, cfg_.env);
  auto env_rng = stream(seed_, kEnvStream);
  auto agent_rng = stream(seed_, kAgentStream);
  PolicyTrace trace;

  for (int episode = 0; episode < cfg_.episodes; ++episode) {
    if (cfg_.persist_classifier && episode > 0) {
      env.reset(env.classifier().clone(), baseline0, /*keep_pool=*/true);
    } else {
      env.reset(restore(*pretrained_), baseline0);
    }
    if (episode_hook_) episode_hook_(episode, env.classifier());

    const double sigma = noise_for_episode(cfg_.agent, episode, cfg_.episodes);
    State state = env.initial_state(env_rng);
    int length = 0;
    while (true) {
      const RawAction raw = agent.act(state.vector, sigma, agent_rng);
      const Action action = to_env_action(raw, agent.bounds());
      StepOutcome out = env.step(state, action, env_rng);
      const double reward = shaped_reward(cfg_.reward_mode, out.diagnostics, cfg_.env.lambda, env_rng);
      ++length;

      trace.steps.push_back({episode, length - 1, state.i0, state.i1, raw, action, reward, out.diagnostics,
                             out.terminal, out.synthetics.front().label});
      agent.remember({state.vector, raw, reward, out.next_state.vector, out.terminal});
      if (agent.ready()) {
        if (trace.agent_updates == 0) trace.buffer_at_first_update = agent.buffer().size();
        for (int s = 0; s < cfg_.agent.updates_per_step; ++s) {
          agent.train_step(agent_rng);
          ++trace.agent_updates;
        }
      }
      if (out.terminal) break;
      state = std::move(out.next_state);
    }
    trace.episode_lengths.push_back(length);
  }
  return {std::move(agent), std::move(trace), std::move(pretrained_), baseline0};
}

TrainedPolicy train_policy(const TrainConfig& cfg, const Dataset& train, const Dataset& val, std::uint64_t seed) {
  return PolicyTrainer(cfg, train, val, seed).run();
}

RolloutResult final_rollout(const DdpgAgent& agent, const Dataset& train, const ValidationScorer& scorer,
                            const TrainConfig& cfg, const Classifier& pretrained, double baseline0,
                            std::uint64_t seed) {
  MixupEnv env(train, scorer, cfg.env);
  auto rng = stream(seed, kRolloutStream);
  RolloutResult out;
  for (int r = 0; r < cfg.rollouts; ++r) {
    env.reset(restore(pretrained), baseline0);
    State state = env.initial_state(rng);
    int length = 0;
    while (true) {
      const Action action = agent.policy_action(state.vector);
      StepOutcome step = env.step(state, action, rng);
      ++length;
      out.synthetics.insert(out.synthetics.end(), step.synthetics.begin(), step.synthetics.end());
      if (step.terminal) break;
      state = std::move(step.next_state);
    }
    out.episode_lengths.push_back(length);
  }
  return out;
}

SeedRun run_seed(const ExperimentConfig& cfg, const Dataset& dataset, Method method, std::uint64_t seed) {
  cfg.train.validate();
  SplitSpec split_spec = cfg.split;
  split_spec.seed = seed;

  SeedRun run;
  run.seed = seed;
  run.splits = split(dataset, split_spec);
  const Dataset& train = run.splits.train;

  ClassifierSpec spec = cfg.train.classifier;
  spec.seed = seed;
  OversampleRequest req = cfg.oversample;
  req.seed = seed;
  auto needs_request = [&req] { req.validate(); };

  switch (method) {
    case Method::None: break;
    case Method::Random: needs_request(); run.synthetics = random_oversample(train, req); break;
    case Method::Smote: needs_request(); run.synthetics = smote(train, req); break;
    case Method::BorderlineSmote: needs_request(); run.synthetics = borderline_smote(train, req); break;
    case Method::Adasyn: needs_request(); run.synthetics = adasyn(train, req); break;
    case Method::Mixboost: {
      needs_request();
      const auto base = fit(spec, train);
      run.synthetics = mixboost(train, *base, req, cfg.train.env.eta);
      break;
    }
    case Method::Mixann: {
      TrainConfig tc = cfg.train;
      tc.classifier = spec;
      PolicyTrainer trainer(tc, train, run.splits.val, seed);
      auto scorer = macro_f1_scorer(run.splits.val);
      trainer.set_scorer(scorer);
      auto policy = trainer.run();
      auto rollout = final_rollout(policy.agent, train, scorer, tc, *policy.pretrained, policy.baseline0, seed);
      run.synthetics = std::move(rollout.synthetics);
      run.episode_lengths = std::move(rollout.episode_lengths);
      if (cfg.keep_trace) run.trace = std::move(policy.trace);
      break;
    }
  }

  run.final_classifier = fit(spec, train.concat(run.synthetics));
  const auto test_features = flatten_features(run.splits.test);
  const auto pred = predict_labels(*run.final_classifier, {test_features, run.splits.test.dim()});
  run.scores = macro_scores(confusion(run.splits.test.labels(), pred));
  return run;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& dataset, Method method, int jobs) {
  cfg.train.validate();
  const auto& seeds = cfg.train.seeds;
  if (method != Method::None && method != Method::Mixann) cfg.oversample.validate();

  std::vector<SeedResult> results(seeds.size());
  std::vector<PolicyTrace> traces(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        SeedRun run = run_seed(cfg, dataset, method, seeds[i]);
        SeedResult r;
        r.seed = seeds[i];
        r.scores = run.scores;
        r.synthetics = run.synthetics.size();
        for (const auto& s : run.synthetics) r.synthetic_minority += s.label == 1 ? 1 : 0;
        if (!run.episode_lengths.empty()) {
          r.mean_episode_length = std::accumulate(run.episode_lengths.begin(), run.episode_lengths.end(), 0.0) /
                                  static_cast<double>(run.episode_lengths.size());
        }
        results[i] = r;
        traces[i] = std::move(run.trace);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(seeds.size());
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp<int>(jobs, 1, static_cast<int>(seeds.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentReport report;
  report.method = method;
  report.classifier = cfg.train.classifier.kind;
  report.per_seed = results;
  const double n = static_cast<double>(results.size());
  double lengths = 0.0;
  for (const auto& r : results) {
    report.mean.precision += r.scores.precision;
    report.mean.recall += r.scores.recall;
    report.mean.f1 += r.scores.f1;
    report.total_synthetics += r.synthetics;
    report.total_synthetic_minority += r.synthetic_minority;
    lengths += r.mean_episode_length;
  }
  report.mean.precision /= n;
  report.mean.recall /= n;
  report.mean.f1 /= n;
  report.mean_episode_length = lengths / n;
  if (cfg.keep_trace) report.traces = std::move(traces);
  return report;
}

}  // namespace mixann
