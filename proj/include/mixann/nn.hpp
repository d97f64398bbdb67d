#pragma once

// Small dense feed-forward networks with hand-written backprop. Used by the
// MLP classifier and by the actor / critic networks.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mixann::nn {

/// Fully connected network, ReLU on hidden layers, linear output. Parameters
/// live in one flat vector: for each layer, the weight matrix (out x in,
/// row-major) followed by the bias vector.
class Mlp {
public:
  /// Per-sample activations recorded by `forward` for `backward`.
  struct Tape {
    std::vector<std::vector<double>> inputs;  // input to each layer
    std::vector<std::vector<double>> pre;     // pre-activation of each layer
  };

  Mlp() = default;
  /// `widths` = {input, hidden..., output}; at least two entries, all >= 1.
  explicit Mlp(std::vector<std::size_t> widths);

  /// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void init_uniform_fan_in(std::mt19937_64& rng);
  void zero();

  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::size_t input_dim() const { return widths_.front(); }
  std::size_t output_dim() const { return widths_.back(); }
  std::size_t layer_count() const { return widths_.size() - 1; }
  std::size_t param_count() const noexcept { return params_.size(); }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  std::vector<double> forward(std::span<const double> x) const;
  std::vector<double> forward(std::span<const double> x, Tape& tape) const;

  /// Adds d(loss)/d(params) into `grad_params` given d(loss)/d(output) and
  /// returns d(loss)/d(input).
  std::vector<double> backward(const Tape& tape, std::span<const double> grad_out,
                               std::span<double> grad_params) const;

  bool operator==(const Mlp&) const = default;

private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + widths_[layer + 1] * widths_[layer];
  }

  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment optimizer state for one parameter vector.
class Adam {
public:
  Adam() = default;
  Adam(std::size_t param_count, AdamConfig config);

  void step(std::span<double> params, std::span<const double> grad);

  const AdamConfig& config() const noexcept { return config_; }
  std::int64_t steps() const noexcept { return t_; }
  std::span<const double> first_moment() const noexcept { return m_; }
  std::span<const double> second_moment() const noexcept { return v_; }

  bool operator==(const Adam&) const = default;

private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace mixann::nn
