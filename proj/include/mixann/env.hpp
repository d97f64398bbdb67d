#pragma once

// The iterative mix-up decision process: a state is a pair of opposite-label
// source samples, an action (k, alpha, n, epsilon) produces n synthetic copies,
// updates the classifier and moves to a new pair drawn near the synthetic
// sample. The reward is lambda * (score gain over a trailing baseline) *
// (mean p(1-p) over the synthetic sample's neighborhood).

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "mixann/classifiers.hpp"
#include "mixann/core_data.hpp"
#include "mixann/mixup.hpp"
#include "mixann/neighbors.hpp"

namespace mixann {

struct EnvConfig {
  int K = 10;          // largest neighborhood an action may request
  int N_max = 5;       // largest oversampling count
  double eta = 0.3;    // label threshold for mix-up
  double lambda = 10.0;
  int m_win = 25;      // trailing window for the score baseline
  int T_max = 50;      // step budget per episode
  std::uint64_t seed = 0;

  void validate() const;
};

struct Action {
  int k = 1;
  double alpha = 0.0;
  int n = 1;
  double epsilon = 0.0;

  void validate(const EnvConfig& cfg) const;
  bool operator==(const Action&) const = default;
};

struct State {
  LabeledSample x0;
  LabeledSample x1;
  std::size_t i0 = 0;  // pool indices of the two sources
  std::size_t i1 = 0;
  std::vector<double> vector;  // concat(x0.features, x1.features)
};

/// State for source `i0` paired with its nearest opposite-label pool point.
State make_state(const NeighborIndex& pool, std::size_t i0);

/// x0 uniform over the pool, x1 its nearest opposite-label partner.
State initial_state(const NeighborIndex& pool, std::mt19937_64& rng);
State initial_state(const Dataset& train, std::mt19937_64& rng);

/// current - mean of the last min(m_win, |history|) scores; `baseline0` when
/// the history is empty.
double improvement_stimulation(std::span<const double> history, double current, double baseline0, int m_win);

/// Mean of P(y=1|x) * P(y=0|x) over the points; in [0, 0.25].
double model_exploration(const Classifier& classifier, std::span<const std::vector<double>> points);

struct StepDiagnostics {
  double delta_m = 0.0;
  double confidence = 0.0;
  double val_score = 0.0;
};

struct StepOutcome {
  State next_state;
  double reward = 0.0;
  std::vector<LabeledSample> synthetics;
  bool terminal = false;
  StepDiagnostics diagnostics;
  std::vector<Neighbor> neighborhood;  // k nearest pool points of the synthetic sample
};

/// Scores a classifier on held-out data (higher is better).
using ValidationScorer = std::function<double(const Classifier&)>;

/// Macro-F1 of the 0.5-thresholded predictions on `val`.
ValidationScorer macro_f1_scorer(const Dataset& val);

/// One episode's mutable world: the classifier being augmented, the
/// original-plus-synthetic pool and the validation-score history.
class MixupEnv {
public:
  MixupEnv(const Dataset& train, ValidationScorer scorer, EnvConfig cfg);

  /// Starts an episode from `classifier` with an empty score history whose
  /// cold-start baseline is `baseline0`. The pool is reset to the training set
  /// unless `keep_pool` is set.
  void reset(ClassifierState classifier, double baseline0, bool keep_pool = false);

  State initial_state(std::mt19937_64& rng) const { return mixann::initial_state(pool_, rng); }
  StepOutcome step(const State& state, const Action& action, std::mt19937_64& rng);

  const Classifier& classifier() const { return *classifier_; }
  const NeighborIndex& pool() const noexcept { return pool_; }
  const std::vector<double>& history() const noexcept { return history_; }
  int steps_taken() const noexcept { return steps_; }
  const EnvConfig& config() const noexcept { return cfg_; }
  std::size_t dim() const noexcept { return base_pool_.dim(); }

private:
  NeighborIndex base_pool_;
  NeighborIndex pool_;
  ValidationScorer scorer_;
  EnvConfig cfg_;
  ClassifierState classifier_;
  std::vector<double> history_;
  double baseline0_ = 0.0;
  int steps_ = 0;
};

}  // namespace mixann
