#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mixann/core_data.hpp"
#include "mixann/kernels.hpp"
#include "mixann/neighbors.hpp"
#include "mixann/nn.hpp"

namespace mixann {

enum class ClassifierKind { Knn, Mlp };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Knn;
  int knn_k = 10;
  std::vector<std::size_t> mlp_layers = {128, 64};
  double mlp_learning_rate = 1e-3;
  int mlp_epochs_initial = 50;
  int mlp_steps_per_update = 20;
  int mlp_batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Probabilistic binary classifier with incremental updates. `predict_proba`
/// must be safe to call concurrently between updates.
class Classifier {
public:
  virtual ~Classifier() = default;

  virtual std::size_t dim() const = 0;
  /// P(y = 1 | x), in [0, 1].
  virtual double predict_proba(std::span<const double> x) const = 0;
  /// Appends `samples` to the training pool and adapts the model.
  virtual void update(std::span<const LabeledSample> samples) = 0;
  virtual std::size_t pool_size() const = 0;
  /// Deep, independent copy.
  virtual std::unique_ptr<Classifier> clone() const = 0;
  /// Hash over the complete model state; equal digests mean bit-identical state.
  virtual std::uint64_t digest() const = 0;
};

using ClassifierState = std::unique_ptr<Classifier>;

ClassifierState fit(const ClassifierSpec& spec, const Dataset& train);
inline ClassifierState snapshot(const Classifier& state) { return state.clone(); }
inline ClassifierState restore(const Classifier& snap) { return snap.clone(); }

class KnnClassifier final : public Classifier {
public:
  KnnClassifier(int k, const Dataset& train);

  std::size_t dim() const override { return pool_.dim(); }
  double predict_proba(std::span<const double> x) const override;
  void update(std::span<const LabeledSample> samples) override;
  std::size_t pool_size() const override { return pool_.size(); }
  std::unique_ptr<Classifier> clone() const override { return std::make_unique<KnnClassifier>(*this); }
  std::uint64_t digest() const override;

  const NeighborIndex& pool() const noexcept { return pool_; }
  int k() const noexcept { return k_; }

private:
  int k_;
  NeighborIndex pool_;
};

/// Binary cross-entropy of a single-logit network over `samples`, averaged.
/// When `grad` is non-empty the mean gradient w.r.t. the parameters is added
/// into it.
double bce_loss(const nn::Mlp& net, std::span<const LabeledSample> samples, std::span<double> grad = {});

class MlpClassifier final : public Classifier {
public:
  /// Initializes weights from spec.seed and runs the initial epochs.
  MlpClassifier(const ClassifierSpec& spec, const Dataset& train);

  std::size_t dim() const override { return net_.input_dim(); }
  double predict_proba(std::span<const double> x) const override;
  void update(std::span<const LabeledSample> samples) override;
  std::size_t pool_size() const override { return pool_.size(); }
  std::unique_ptr<Classifier> clone() const override { return std::make_unique<MlpClassifier>(*this); }
  std::uint64_t digest() const override;

  /// Runs `epochs` shuffled mini-batch passes over the pool.
  void train_epochs(int epochs);
  double pool_loss() const { return bce_loss(net_, pool_); }

  nn::Mlp& network() noexcept { return net_; }
  const nn::Mlp& network() const noexcept { return net_; }
  const std::vector<LabeledSample>& pool() const noexcept { return pool_; }

private:
  void gradient_step(std::span<const LabeledSample> batch);

  ClassifierSpec spec_;
  std::vector<LabeledSample> pool_;
  nn::Mlp net_;
  nn::Adam adam_;
  std::mt19937_64 rng_;
};

/// Row-major copy of the features of `dataset`.
std::vector<double> flatten_features(const Dataset& dataset);

/// predict_proba over every row of `points`, evaluated with the parallel kernel.
std::vector<double> predict_proba_batch(const Classifier& classifier, kernels::PointBlock points);

/// Hard labels with the 0.5 rule: predicted minority iff P(y=1|x) > 0.5.
std::vector<Label> predict_labels(const Classifier& classifier, kernels::PointBlock points);

/// FNV-1a over raw bytes; used by `digest` implementations.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace mixann
