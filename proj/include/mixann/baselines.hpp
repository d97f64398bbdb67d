#pragma once

// Classical oversamplers used as comparison points. Each returns exactly
// `n_synthetic` samples and is deterministic for a fixed seed.

#include <cstdint>
#include <vector>

#include "mixann/classifiers.hpp"
#include "mixann/core_data.hpp"

namespace mixann {

struct OversampleRequest {
  int n_synthetic = 0;
  int k_neighbors = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// A generated sample plus the training-set indices it was built from.
struct TracedSynthetic {
  LabeledSample sample;
  std::size_t base = 0;
  std::size_t partner = 0;
  double gap = 0.0;  // position along base -> partner
};

enum class BorderlineCategory { Safe, Danger, Noise };

/// For each minority sample (in training order), the training indices of its
/// min(k, m - 1) nearest other minority samples.
std::vector<std::vector<std::size_t>> minority_neighbor_table(const Dataset& train, int k);

/// Majority fraction among the min(k, N - 1) nearest other training samples,
/// for each minority sample in training order.
std::vector<double> minority_majority_fractions(const Dataset& train, int k);

/// SAFE (r < 0.5), DANGER (0.5 <= r < 1) or NOISE (r = 1) per minority sample.
std::vector<BorderlineCategory> borderline_categories(const Dataset& train, int k);

/// Per-minority synthetic counts; sums to `n_synthetic` exactly.
std::vector<std::size_t> adasyn_allocation(const Dataset& train, int k, int n_synthetic);

/// Mean of two distinct uniformly drawn minority samples.
std::vector<LabeledSample> random_oversample(const Dataset& train, const OversampleRequest& req);

std::vector<TracedSynthetic> smote_traced(const Dataset& train, const OversampleRequest& req);
std::vector<LabeledSample> smote(const Dataset& train, const OversampleRequest& req);

/// Borderline-1 variant: only DANGER samples act as base points. Falls back to
/// plain SMOTE (with a warning) when there are none.
std::vector<TracedSynthetic> borderline_smote_traced(const Dataset& train, const OversampleRequest& req);
std::vector<LabeledSample> borderline_smote(const Dataset& train, const OversampleRequest& req);

std::vector<TracedSynthetic> adasyn_traced(const Dataset& train, const OversampleRequest& req);
std::vector<LabeledSample> adasyn(const Dataset& train, const OversampleRequest& req);

/// Base-point weights for the entropy-guided mixer: binary entropy of the
/// classifier's prediction at each minority sample, uniform when all are 0.
std::vector<double> mixboost_base_weights(const Dataset& train, const Classifier& classifier);

/// Entropy-weighted minority base, uniform majority partner, alpha ~ Beta(2, 5),
/// hard label by threshold `eta`. An approximation of MixBoost: the original
/// ratio distribution is not reproduced here.
std::vector<TracedSynthetic> mixboost_traced(const Dataset& train, const Classifier& classifier,
                                             const OversampleRequest& req, double eta);
std::vector<LabeledSample> mixboost(const Dataset& train, const Classifier& classifier,
                                    const OversampleRequest& req, double eta);

}  // namespace mixann
