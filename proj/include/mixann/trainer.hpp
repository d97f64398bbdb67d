#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mixann/agent.hpp"
#include "mixann/baselines.hpp"
#include "mixann/classifiers.hpp"
#include "mixann/core_data.hpp"
#include "mixann/env.hpp"
#include "mixann/metrics.hpp"

namespace mixann {

enum class RewardMode { Full, Random, NoImprovement, NoExploration };

std::string to_string(RewardMode mode);
RewardMode reward_mode_from_string(const std::string& name);

struct TrainConfig {
  EnvConfig env;
  AgentConfig agent;
  ClassifierSpec classifier;
  int episodes = 100;
  RewardMode reward_mode = RewardMode::Full;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  /// Keep the classifier (and its synthetic pool) across episodes instead of
  /// restoring the pretrained snapshot.
  bool persist_classifier = false;
  int rollouts = 5;  // greedy episodes used to build the final augmentation set

  void validate() const;
};

/// Reward stored for the agent under each ablation mode.
double shaped_reward(RewardMode mode, const StepDiagnostics& diag, double lambda, std::mt19937_64& rng);

/// Exploration noise for `episode` out of `episodes`, linear from start to final.
double noise_for_episode(const AgentConfig& cfg, int episode, int episodes);

struct StepTrace {
  int episode = 0;
  int step = 0;
  std::size_t i0 = 0;
  std::size_t i1 = 0;
  RawAction raw{};
  Action action;
  double reward = 0.0;
  StepDiagnostics diagnostics;
  bool terminal = false;
  int synthetic_label = 0;
};

struct PolicyTrace {
  std::vector<StepTrace> steps;
  std::vector<int> episode_lengths;
  std::int64_t agent_updates = 0;
  /// Buffer fill level at the first agent update (0 if none happened).
  std::size_t buffer_at_first_update = 0;
};

struct TrainedPolicy {
  DdpgAgent agent;
  PolicyTrace trace;
  ClassifierState pretrained;
  double baseline0 = 0.0;
};

/// Runs the episodic mix-up policy search. Test hooks allow injecting a
/// classifier stub, a scripted validation scorer and a pre-built agent.
class PolicyTrainer {
public:
  PolicyTrainer(TrainConfig cfg, const Dataset& train, const Dataset& val, std::uint64_t seed);

  void set_scorer(ValidationScorer scorer) { scorer_ = std::move(scorer); }
  void set_pretrained(ClassifierState classifier) { pretrained_ = std::move(classifier); }
  /// Replaces the freshly initialized agent (e.g. with hand-set weights).
  void set_agent_init(std::function<void(DdpgAgent&)> init) { agent_init_ = std::move(init); }
  /// Called with the classifier every episode starts from.
  void on_episode_start(std::function<void(int, const Classifier&)> hook) { episode_hook_ = std::move(hook); }

  TrainedPolicy run();

private:
  TrainConfig cfg_;
  const Dataset& train_;
  const Dataset& val_;
  std::uint64_t seed_;
  ValidationScorer scorer_;
  ClassifierState pretrained_;
  std::function<void(DdpgAgent&)> agent_init_;
  std::function<void(int, const Classifier&)> episode_hook_;
};

TrainedPolicy train_policy(const TrainConfig& cfg, const Dataset& train, const Dataset& val, std::uint64_t seed);

struct RolloutResult {
  std::vector<LabeledSample> synthetics;
  std::vector<int> episode_lengths;
};

/// Greedy episodes from `rollouts` independent initial states, each starting
/// from a copy of `pretrained`; all synthetics are pooled.
RolloutResult final_rollout(const DdpgAgent& agent, const Dataset& train, const ValidationScorer& scorer,
                            const TrainConfig& cfg, const Classifier& pretrained, double baseline0,
                            std::uint64_t seed);

enum class Method { None, Random, Smote, BorderlineSmote, Adasyn, Mixboost, Mixann };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct ExperimentConfig {
  TrainConfig train;
  SplitSpec split;
  OversampleRequest oversample;  // used by the classical oversamplers
  bool keep_trace = false;
};

struct SeedRun {
  std::uint64_t seed = 0;
  Splits splits;
  std::vector<LabeledSample> synthetics;
  ClassifierState final_classifier;
  MacroScores scores;
  std::vector<int> episode_lengths;  // mixann rollouts only
  PolicyTrace trace;                 // filled when keep_trace is set
};

struct SeedResult {
  std::uint64_t seed = 0;
  MacroScores scores;
  std::size_t synthetics = 0;
  std::size_t synthetic_minority = 0;
  double mean_episode_length = 0.0;
};

struct ExperimentReport {
  Method method = Method::None;
  ClassifierKind classifier = ClassifierKind::Knn;
  std::vector<SeedResult> per_seed;
  MacroScores mean;
  std::size_t total_synthetics = 0;
  std::size_t total_synthetic_minority = 0;
  double mean_episode_length = 0.0;
  std::vector<PolicyTrace> traces;  // per seed, when keep_trace is set
};

/// One seed of the protocol: split, augment with `method`, refit a fresh
/// classifier on train + synthetics and score it on the test split.
SeedRun run_seed(const ExperimentConfig& cfg, const Dataset& dataset, Method method, std::uint64_t seed);

/// run_seed over every configured seed (up to `jobs` in parallel) and average.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& dataset, Method method, int jobs = 1);

}  // namespace mixann
