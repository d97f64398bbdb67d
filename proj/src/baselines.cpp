#include "mixann/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mixann/error.hpp"
#include "mixann/log.hpp"
#include "mixann/mixup.hpp"
#include "mixann/neighbors.hpp"

namespace mixann {

void OversampleRequest::validate() const {
  if (n_synthetic < 1) throw Error(ErrorCode::InvalidConfig, "n_synthetic must be >= 1");
  if (k_neighbors < 1) throw Error(ErrorCode::InvalidConfig, "k_neighbors must be >= 1");
}

namespace {

std::vector<std::size_t> require_minorities(const Dataset& train, std::size_t at_least) {
  auto minority = train.indices_of(1);
  if (minority.size() < at_least) {
    throw Error(ErrorCode::TooFewMinority, "need at least " + std::to_string(at_least) +
                                               " minority samples, have " + std::to_string(minority.size()));
  }
  return minority;
}

// The k nearest points other than `self`, in (distance, index) order.
std::vector<std::size_t> nearest_others(const NeighborIndex& index, std::size_t self, std::size_t k) {
  auto found = index.k_nearest(index.point(self), k + 1);
  std::vector<std::size_t> out;
  out.reserve(k);
  for (const auto& n : found)
    if (n.index != self && out.size() < k) out.push_back(n.index);
  return out;
}

LabeledSample interpolate(const LabeledSample& base, const LabeledSample& partner, double gap) {
  LabeledSample s{base.features, 1};
  for (std::size_t j = 0; j < s.features.size(); ++j)
    s.features[j] = base.features[j] + gap * (partner.features[j] - base.features[j]);
  return s;
}

std::vector<LabeledSample> strip(std::vector<TracedSynthetic> traced) {
  std::vector<LabeledSample> out;
  out.reserve(traced.size());
  for (auto& t : traced) out.push_back(std::move(t.sample));
  return out;
}

// SMOTE generation from an explicit sequence of base points (minority-list
// positions); neighbors come from the shared minority neighbor table.
TracedSynthetic smote_one(const Dataset& train, const std::vector<std::size_t>& minority,
                          const std::vector<std::vector<std::size_t>>& table, std::size_t base_pos,
                          std::mt19937_64& rng) {
  const auto& row = table[base_pos];
  std::uniform_int_distribution<std::size_t> pick(0, row.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t partner = row[pick(rng)];
  const double gap = unit(rng);
  const std::size_t base = minority[base_pos];
  return {interpolate(train[base], train[partner], gap), base, partner, gap};
}

}  // namespace

std::vector<std::vector<std::size_t>> minority_neighbor_table(const Dataset& train, int k) {
  const auto minority = require_minorities(train, 2);
  const auto keff = std::min<std::size_t>(static_cast<std::size_t>(k), minority.size() - 1);
  const NeighborIndex index(train.subset(minority));
  std::vector<std::vector<std::size_t>> table(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) {
    for (std::size_t local : nearest_others(index, i, keff)) table[i].push_back(minority[local]);
  }
  return table;
}

std::vector<double> minority_majority_fractions(const Dataset& train, int k) {
  const auto minority = require_minorities(train, 2);
  const auto keff = std::min<std::size_t>(static_cast<std::size_t>(k), train.size() - 1);
  const NeighborIndex index(train);
  std::vector<double> out;
  out.reserve(minority.size());
  for (std::size_t i : minority) {
    const auto nb = nearest_others(index, i, keff);
    std::size_t majority = 0;
    for (std::size_t j : nb) majority += train[j].label == 0 ? 1 : 0;
    out.push_back(static_cast<double>(majority) / static_cast<double>(nb.size()));
  }
  return out;
}

std::vector<BorderlineCategory> borderline_categories(const Dataset& train, int k) {
  std::vector<BorderlineCategory> out;
  for (double r : minority_majority_fractions(train, k)) {
    if (r < 0.5) out.push_back(BorderlineCategory::Safe);
    else if (r < 1.0) out.push_back(BorderlineCategory::Danger);
    else out.push_back(BorderlineCategory::Noise);
  }
  return out;
}

std::vector<std::size_t> adasyn_allocation(const Dataset& train, int k, int n_synthetic) {
  auto weights = minority_majority_fractions(train, k);
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; }))
    std::fill(weights.begin(), weights.end(), 1.0);
  return largest_remainder(weights, static_cast<std::size_t>(n_synthetic));
}

std::vector<LabeledSample> random_oversample(const Dataset& train, const OversampleRequest& req) {
  req.validate();
  const auto minority = require_minorities(train, 2);
  std::mt19937_64 rng(req.seed);
  std::uniform_int_distribution<std::size_t> first(0, minority.size() - 1);
  std::uniform_int_distribution<std::size_t> second(0, minority.size() - 2);
  std::vector<LabeledSample> out;
  out.reserve(static_cast<std::size_t>(req.n_synthetic));
  for (int s = 0; s < req.n_synthetic; ++s) {
    const std::size_t a = first(rng);
    std::size_t b = second(rng);
    if (b >= a) ++b;
    out.push_back(interpolate(train[minority[a]], train[minority[b]], 0.5));
  }
  return out;
}

std::vector<TracedSynthetic> smote_traced(const Dataset& train, const OversampleRequest& req) {
  req.validate();
  const auto minority = require_minorities(train, 2);
  const auto table = minority_neighbor_table(train, req.k_neighbors);
  std::mt19937_64 rng(req.seed);
  std::uniform_int_distribution<std::size_t> base(0, minority.size() - 1);
  std::vector<TracedSynthetic> out;
  out.reserve(static_cast<std::size_t>(req.n_synthetic));
  for (int s = 0; s < req.n_synthetic; ++s) out.push_back(smote_one(train, minority, table, base(rng), rng));
  return out;
}

std::vector<LabeledSample> smote(const Dataset& train, const OversampleRequest& req) {
  return strip(smote_traced(train, req));
}

std::vector<TracedSynthetic> borderline_smote_traced(const Dataset& train, const OversampleRequest& req) {
  req.validate();
  const auto minority = require_minorities(train, 2);
  const auto categories = borderline_categories(train, req.k_neighbors);
  std::vector<std::size_t> danger;
  for (std::size_t i = 0; i < categories.size(); ++i)
    if (categories[i] == BorderlineCategory::Danger) danger.push_back(i);
  if (danger.empty()) {
    log::warning("borderline_smote: no DANGER minority samples, falling back to SMOTE");
    return smote_traced(train, req);
  }
  const auto table = minority_neighbor_table(train, req.k_neighbors);
  std::mt19937_64 rng(req.seed);
  std::uniform_int_distribution<std::size_t> base(0, danger.size() - 1);
  std::vector<TracedSynthetic> out;
  out.reserve(static_cast<std::size_t>(req.n_synthetic));
  for (int s = 0; s < req.n_synthetic; ++s)
    out.push_back(smote_one(train, minority, table, danger[base(rng)], rng));
  return out;
}

std::vector<LabeledSample> borderline_smote(const Dataset& train, const OversampleRequest& req) {
  return strip(borderline_smote_traced(train, req));
}

std::vector<TracedSynthetic> adasyn_traced(const Dataset& train, const OversampleRequest& req) {
  req.validate();
  const auto minority = require_minorities(train, 2);
  const auto alloc = adasyn_allocation(train, req.k_neighbors, req.n_synthetic);
  const auto table = minority_neighbor_table(train, req.k_neighbors);
  std::mt19937_64 rng(req.seed);
  std::vector<TracedSynthetic> out;
  out.reserve(static_cast<std::size_t>(req.n_synthetic));
  for (std::size_t i = 0; i < minority.size(); ++i)
    for (std::size_t c = 0; c < alloc[i]; ++c) out.push_back(smote_one(train, minority, table, i, rng));
  return out;
}

std::vector<LabeledSample> adasyn(const Dataset& train, const OversampleRequest& req) {
  return strip(adasyn_traced(train, req));
}

std::vector<double> mixboost_base_weights(const Dataset& train, const Classifier& classifier) {
  const auto minority = require_minorities(train, 1);
  std::vector<double> weights;
  weights.reserve(minority.size());
  for (std::size_t i : minority) {
    const double p = classifier.predict_proba(train[i].features);
    double h = 0.0;
    if (p > 0.0 && p < 1.0) h = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
    weights.push_back(h);
  }
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; }))
    std::fill(weights.begin(), weights.end(), 1.0);
  return weights;
}

std::vector<TracedSynthetic> mixboost_traced(const Dataset& train, const Classifier& classifier,
                                             const OversampleRequest& req, double eta) {
  req.validate();
  if (!train.has_both_classes()) throw Error(ErrorCode::SingleClassData, "mixboost needs both classes");
  const auto minority = train.indices_of(1);
  const auto majority = train.indices_of(0);
  const auto weights = mixboost_base_weights(train, classifier);

  std::mt19937_64 rng(req.seed);
  std::discrete_distribution<std::size_t> base(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> partner(0, majority.size() - 1);
  std::gamma_distribution<double> shape_a(2.0, 1.0);
  std::gamma_distribution<double> shape_b(5.0, 1.0);

  std::vector<TracedSynthetic> out;
  out.reserve(static_cast<std::size_t>(req.n_synthetic));
  for (int s = 0; s < req.n_synthetic; ++s) {
    const std::size_t b = minority[base(rng)];
    const std::size_t p = majority[partner(rng)];
    const double ga = shape_a(rng);
    const double gb = shape_b(rng);
    const double alpha = ga / (ga + gb);
    LabeledSample sample{mix_features(train[b].features, train[p].features, alpha),
                         mix_label(train[b].label, train[p].label, alpha, eta)};
    // gap is measured from the base, so it is 1 - alpha.
    out.push_back({std::move(sample), b, p, 1.0 - alpha});
  }
  return out;
}

std::vector<LabeledSample> mixboost(const Dataset& train, const Classifier& classifier,
                                    const OversampleRequest& req, double eta) {
  return strip(mixboost_traced(train, classifier, req, eta));
}

}  // namespace mixann
