#include "mixann/classifiers.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mixann/error.hpp"

namespace mixann {

std::string to_string(ClassifierKind kind) { return kind == ClassifierKind::Knn ? "knn" : "mlp"; }

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "mlp") return ClassifierKind::Mlp;
  throw Error(ErrorCode::InvalidConfig, "unknown classifier kind '" + name + "'");
}

void ClassifierSpec::validate() const {
  if (knn_k < 1) throw Error(ErrorCode::InvalidConfig, "knn_k must be >= 1");
  if (mlp_layers.empty()) throw Error(ErrorCode::InvalidConfig, "mlp_layers must list at least one width");
  for (auto w : mlp_layers)
    if (w < 1) throw Error(ErrorCode::InvalidConfig, "hidden widths must be >= 1");
  if (!(mlp_learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "mlp_learning_rate must be > 0");
  if (mlp_epochs_initial < 1) throw Error(ErrorCode::InvalidConfig, "mlp_epochs_initial must be >= 1");
  if (mlp_steps_per_update < 1) throw Error(ErrorCode::InvalidConfig, "mlp_steps_per_update must be >= 1");
  if (mlp_batch_size < 1) throw Error(ErrorCode::InvalidConfig, "mlp_batch_size must be >= 1");
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

void require_both_classes(const Dataset& train) {
  if (train.empty() || !train.has_both_classes())
    throw Error(ErrorCode::SingleClassData, "training data must contain both classes");
}

void check_dims(std::span<const LabeledSample> samples, std::size_t dim) {
  for (const auto& s : samples) {
    if (s.features.size() != dim)
      throw Error(ErrorCode::DimensionMismatch, "sample dimension does not match classifier");
  }
}

}  // namespace

ClassifierState fit(const ClassifierSpec& spec, const Dataset& train) {
  spec.validate();
  require_both_classes(train);
  if (spec.kind == ClassifierKind::Knn) return std::make_unique<KnnClassifier>(spec.knn_k, train);
  return std::make_unique<MlpClassifier>(spec, train);
}

// --- KNN ----------------------------------------------------------------

KnnClassifier::KnnClassifier(int k, const Dataset& train) : k_(k), pool_(train) {
  if (k_ < 1) throw Error(ErrorCode::InvalidConfig, "knn_k must be >= 1");
  require_both_classes(train);
}

double KnnClassifier::predict_proba(std::span<const double> x) const {
  const auto nn = pool_.k_nearest(x, static_cast<std::size_t>(k_));
  std::size_t positive = 0;
  for (const auto& n : nn) positive += pool_.label(n.index) == 1 ? 1 : 0;
  return static_cast<double>(positive) / static_cast<double>(nn.size());
}

void KnnClassifier::update(std::span<const LabeledSample> samples) {
  check_dims(samples, dim());
  for (const auto& s : samples) pool_.append(s);
}

std::uint64_t KnnClassifier::digest() const {
  std::uint64_t h = fnv1a(&k_, sizeof(k_));
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    auto p = pool_.point(i);
    h = fnv1a(p.data(), p.size_bytes(), h);
  }
  auto labels = pool_.labels();
  return fnv1a(labels.data(), labels.size_bytes(), h);
}

// --- MLP ----------------------------------------------------------------

double bce_loss(const nn::Mlp& net, std::span<const LabeledSample> samples, std::span<double> grad) {
  if (samples.empty()) throw Error(ErrorCode::EmptyBatch, "loss over an empty batch");
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  double loss = 0.0;
  nn::Mlp::Tape tape;
  for (const auto& s : samples) {
    const double z = net.forward(s.features, tape)[0];
    const double y = static_cast<double>(s.label);
    loss += nn::softplus(z) - y * z;
    if (!grad.empty()) {
      const double dz = (nn::sigmoid(z) - y) * inv_n;
      net.backward(tape, std::span<const double>(&dz, 1), grad);
    }
  }
  return loss * inv_n;
}

MlpClassifier::MlpClassifier(const ClassifierSpec& spec, const Dataset& train)
    : spec_(spec), pool_(train.samples()), rng_(spec.seed) {
  spec_.validate();
  require_both_classes(train);
  std::vector<std::size_t> widths{train.dim()};
  widths.insert(widths.end(), spec_.mlp_layers.begin(), spec_.mlp_layers.end());
  widths.push_back(1);
  net_ = nn::Mlp(std::move(widths));
  net_.init_uniform_fan_in(rng_);
  adam_ = nn::Adam(net_.param_count(), {spec_.mlp_learning_rate});
  train_epochs(spec_.mlp_epochs_initial);
}

double MlpClassifier::predict_proba(std::span<const double> x) const {
  return nn::sigmoid(net_.forward(x)[0]);
}

void MlpClassifier::gradient_step(std::span<const LabeledSample> batch) {
  std::vector<double> grad(net_.param_count(), 0.0);
  bce_loss(net_, batch, grad);
  adam_.step(net_.params(), grad);
}

void MlpClassifier::train_epochs(int epochs) {
  const auto batch_size = static_cast<std::size_t>(spec_.mlp_batch_size);
  std::vector<std::size_t> order(pool_.size());
  std::vector<LabeledSample> batch;
  for (int e = 0; e < epochs; ++e) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(pool_[order[i]]);
      gradient_step(batch);
    }
  }
}

void MlpClassifier::update(std::span<const LabeledSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyBatch, "update with no samples");
  check_dims(samples, dim());
  pool_.insert(pool_.end(), samples.begin(), samples.end());

  const auto batch_size = static_cast<std::size_t>(spec_.mlp_batch_size);
  const std::size_t fill = batch_size > samples.size() ? batch_size - samples.size() : 0;
  std::vector<std::size_t> order(pool_.size());
  std::vector<LabeledSample> batch;
  for (int step = 0; step < spec_.mlp_steps_per_update; ++step) {
    batch.assign(samples.begin(), samples.end());
    // Partial Fisher-Yates: the first `take` slots become a uniform draw
    // without replacement from the whole pool.
    std::iota(order.begin(), order.end(), 0);
    const std::size_t take = std::min(fill, order.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng_)]);
      batch.push_back(pool_[order[i]]);
    }
    gradient_step(batch);
  }
}

std::uint64_t MlpClassifier::digest() const {
  auto p = net_.params();
  std::uint64_t h = fnv1a(p.data(), p.size_bytes());
  auto m = adam_.first_moment();
  auto v = adam_.second_moment();
  h = fnv1a(m.data(), m.size_bytes(), h);
  h = fnv1a(v.data(), v.size_bytes(), h);
  const auto t = adam_.steps();
  h = fnv1a(&t, sizeof(t), h);
  for (const auto& s : pool_) {
    h = fnv1a(s.features.data(), s.features.size() * sizeof(double), h);
    h = fnv1a(&s.label, sizeof(s.label), h);
  }
  std::ostringstream rng_state;
  rng_state << rng_;
  const auto text = rng_state.str();
  return fnv1a(text.data(), text.size(), h);
}

// --- batch helpers --------------------------------------------------------

std::vector<double> flatten_features(const Dataset& dataset) {
  std::vector<double> out;
  out.reserve(dataset.size() * dataset.dim());
  for (const auto& s : dataset.samples()) out.insert(out.end(), s.features.begin(), s.features.end());
  return out;
}

std::vector<double> predict_proba_batch(const Classifier& classifier, kernels::PointBlock points) {
  if (points.dim != classifier.dim())
    throw Error(ErrorCode::DimensionMismatch, "batch dimension does not match classifier");
  std::vector<double> out(points.rows());
  kernels::parallel::map_points(points, [&classifier](std::span<const double> x) {
    return classifier.predict_proba(x);
  }, out);
  return out;
}

std::vector<Label> predict_labels(const Classifier& classifier, kernels::PointBlock points) {
  const auto proba = predict_proba_batch(classifier, points);
  std::vector<Label> out(proba.size());
  for (std::size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] > 0.5 ? 1 : 0;
  return out;
}

}  // namespace mixann
