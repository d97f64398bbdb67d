#include "mixann/env.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "mixann/error.hpp"
#include "mixann/metrics.hpp"

namespace mixann {

void EnvConfig::validate() const {
  if (K < 1) throw Error(ErrorCode::InvalidConfig, "env.K must be >= 1");
  if (N_max < 1) throw Error(ErrorCode::InvalidConfig, "env.N_max must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::InvalidConfig, "env.eta must lie in [0,1]");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "env.lambda must be > 0");
  if (m_win < 2) throw Error(ErrorCode::InvalidConfig, "env.m_win must be >= 2");
  if (T_max < 1) throw Error(ErrorCode::InvalidConfig, "env.T_max must be >= 1");
}

void Action::validate(const EnvConfig& cfg) const {
  if (k < 1 || k > cfg.K) throw Error(ErrorCode::InvalidConfig, "action k out of [1, K]");
  if (n < 1 || n > cfg.N_max) throw Error(ErrorCode::InvalidConfig, "action n out of [1, N_max]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "action alpha out of [0,1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidConfig, "action epsilon out of [0,1]");
}

State make_state(const NeighborIndex& pool, std::size_t i0) {
  const Label y0 = pool.label(i0);
  const auto partner = pool.nearest_with_label(pool.point(i0), 1 - y0);
  State s;
  s.i0 = i0;
  s.i1 = partner.index;
  auto p0 = pool.point(i0);
  auto p1 = pool.point(partner.index);
  s.x0 = {{p0.begin(), p0.end()}, y0};
  s.x1 = {{p1.begin(), p1.end()}, pool.label(partner.index)};
  s.vector.reserve(p0.size() * 2);
  s.vector.insert(s.vector.end(), p0.begin(), p0.end());
  s.vector.insert(s.vector.end(), p1.begin(), p1.end());
  return s;
}

State initial_state(const NeighborIndex& pool, std::mt19937_64& rng) {
  if (pool.size() == 0 || pool.count(0) == 0 || pool.count(1) == 0)
    throw Error(ErrorCode::SingleClassData, "initial state needs both classes");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return make_state(pool, pick(rng));
}

State initial_state(const Dataset& train, std::mt19937_64& rng) {
  if (!train.has_both_classes()) throw Error(ErrorCode::SingleClassData, "initial state needs both classes");
  return initial_state(NeighborIndex(train), rng);
}

double improvement_stimulation(std::span<const double> history, double current, double baseline0, int m_win) {
  if (history.empty()) return current - baseline0;
  const std::size_t window = std::min(history.size(), static_cast<std::size_t>(std::max(m_win, 1)));
  const auto tail = history.subspan(history.size() - window);
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(window);
  return current - mean;
}

double model_exploration(const Classifier& classifier, std::span<const std::vector<double>> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyNeighborhood, "model exploration over no points");
  double acc = 0.0;
  for (const auto& x : points) {
    const double p = classifier.predict_proba(x);
    acc += p * (1.0 - p);
  }
  return acc / static_cast<double>(points.size());
}

ValidationScorer macro_f1_scorer(const Dataset& val) {
  if (val.empty()) throw Error(ErrorCode::InvalidConfig, "validation set is empty");
  auto features = std::make_shared<const std::vector<double>>(flatten_features(val));
  auto truth = std::make_shared<const std::vector<Label>>(val.labels());
  const std::size_t dim = val.dim();
  return [features, truth, dim](const Classifier& classifier) {
    const auto pred = predict_labels(classifier, {*features, dim});
    return macro_f1(*truth, pred);
  };
}

MixupEnv::MixupEnv(const Dataset& train, ValidationScorer scorer, EnvConfig cfg)
    : base_pool_(train), pool_(base_pool_), scorer_(std::move(scorer)), cfg_(cfg) {
  cfg_.validate();
  if (!train.has_both_classes()) throw Error(ErrorCode::SingleClassData, "environment needs both classes");
}

void MixupEnv::reset(ClassifierState classifier, double baseline0, bool keep_pool) {
  if (!classifier) throw Error(ErrorCode::InvalidConfig, "environment reset without a classifier");
  if (classifier->dim() != base_pool_.dim())
    throw Error(ErrorCode::DimensionMismatch, "classifier dimension does not match the training data");
  classifier_ = std::move(classifier);
  if (!keep_pool) pool_ = base_pool_;
  history_.clear();
  baseline0_ = baseline0;
  steps_ = 0;
}

StepOutcome MixupEnv::step(const State& state, const Action& action, std::mt19937_64& rng) {
  if (!classifier_) throw Error(ErrorCode::InvalidConfig, "step before reset");
  action.validate(cfg_);

  StepOutcome out;
  out.synthetics = synthesize({state.x0, state.x1}, action.alpha, action.n, MixConfig{cfg_.eta});
  classifier_->update(out.synthetics);
  for (const auto& s : out.synthetics) pool_.append(s);
  ++steps_;

  const double score = scorer_(*classifier_);
  const double delta = improvement_stimulation(history_, score, baseline0_, cfg_.m_win);
  history_.push_back(score);

  const auto& x_syn = out.synthetics.front().features;
  out.neighborhood = pool_.k_nearest(x_syn, static_cast<std::size_t>(action.k));
  std::vector<std::vector<double>> points;
  points.reserve(out.neighborhood.size());
  for (const auto& nb : out.neighborhood) {
    auto p = pool_.point(nb.index);
    points.emplace_back(p.begin(), p.end());
  }
  const double confidence = model_exploration(*classifier_, points);

  out.diagnostics = {delta, confidence, score};
  out.reward = cfg_.lambda * delta * confidence;

  if (pool_.count(0) == 0 || pool_.count(1) == 0)
    throw Error(ErrorCode::NoOppositeLabel, "pool lost a class");
  std::uniform_int_distribution<std::size_t> pick(0, out.neighborhood.size() - 1);
  out.next_state = make_state(pool_, out.neighborhood[pick(rng)].index);
  out.terminal = action.epsilon >= 0.5 || steps_ >= cfg_.T_max;
  return out;
}

}  // namespace mixann
