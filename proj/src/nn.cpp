#include "mixann/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixann/error.hpp"

namespace mixann::nn {

Mlp::Mlp(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw Error(ErrorCode::InvalidConfig, "network needs input and output widths");
  for (auto w : widths_)
    if (w == 0) throw Error(ErrorCode::InvalidConfig, "layer widths must be positive");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(total);
    total += widths_[l + 1] * widths_[l] + widths_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Mlp::init_uniform_fan_in(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t begin = weight_offset(l);
    const std::size_t end = bias_offset(l) + widths_[l + 1];
    for (std::size_t i = begin; i < end; ++i) params_[i] = dist(rng);
  }
}

void Mlp::zero() { std::fill(params_.begin(), params_.end(), 0.0); }

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Tape tape;
  return forward(x, tape);
}

std::vector<double> Mlp::forward(std::span<const double> x, Tape& tape) const {
  if (x.size() != input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "network input of size " + std::to_string(x.size()) +
                                                  ", expected " + std::to_string(input_dim()));
  }
  tape.inputs.resize(layer_count());
  tape.pre.resize(layer_count());
  std::vector<double> a(x.begin(), x.end());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = widths_[l];
    const std::size_t out = widths_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = acc;
    }
    tape.inputs[l] = std::move(a);
    tape.pre[l] = z;
    if (l + 1 < layer_count()) {
      for (auto& v : z) v = v > 0.0 ? v : 0.0;
    }
    a = std::move(z);
  }
  return a;
}

std::vector<double> Mlp::backward(const Tape& tape, std::span<const double> grad_out,
                                  std::span<double> grad_params) const {
  if (grad_out.size() != output_dim() || grad_params.size() != params_.size())
    throw Error(ErrorCode::ShapeMismatch, "gradient buffers do not match the network");
  std::vector<double> delta(grad_out.begin(), grad_out.end());
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t in = widths_[l];
    const std::size_t out = widths_[l + 1];
    if (l + 1 < layer_count()) {
      for (std::size_t o = 0; o < out; ++o)
        if (!(tape.pre[l][o] > 0.0)) delta[o] = 0.0;
    }
    const double* w = params_.data() + weight_offset(l);
    double* gw = grad_params.data() + weight_offset(l);
    double* gb = grad_params.data() + bias_offset(l);
    const auto& a = tape.inputs[l];
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] += d;
      if (d == 0.0) continue;
      const double* row = w + o * in;
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        grow[i] += d * a[i];
        prev[i] += d * row[i];
      }
    }
    delta = std::move(prev);
  }
  return delta;
}

Adam::Adam(std::size_t param_count, AdamConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {
  if (!(config_.learning_rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw Error(ErrorCode::ShapeMismatch, "optimizer state does not match parameter vector");
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace mixann::nn
