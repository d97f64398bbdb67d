#pragma once

// Deterministic actor-critic over the (k, alpha, n, epsilon) action space.
// The actor emits a raw 4-vector; the environment sees w * sigmoid(raw) with k
// and n rounded. The critic scores (state, raw action) so gradients flow
// through the smooth part of the transform.

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "mixann/env.hpp"
#include "mixann/nn.hpp"

namespace mixann {

inline constexpr std::size_t kActionDim = 4;
using RawAction = std::array<double, kActionDim>;

struct ActionBounds {
  std::array<double, kActionDim> w{10.0, 1.0, 5.0, 1.0};

  static ActionBounds for_env(const EnvConfig& cfg) {
    return {{static_cast<double>(cfg.K), 1.0, static_cast<double>(cfg.N_max), 1.0}};
  }
  void validate() const;
};

struct AgentConfig {
  double gamma = 0.99;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  int batch_size = 64;
  double noise_sigma = 0.1;        // exploration noise at the first episode
  double noise_sigma_final = 0.01; // reached linearly at the last episode
  double tau = 0.005;
  bool use_targets = true;
  int updates_per_step = 1;
  int buffer_capacity = 10000;
  std::vector<std::size_t> hidden = {64, 64};
  std::uint64_t seed = 0;

  void validate() const;
};

struct TransitionRecord {
  std::vector<double> s;
  RawAction a_raw{};
  double r = 0.0;
  std::vector<double> s_next;
  bool terminal = false;
};

/// Bounded FIFO of transitions with uniform sampling without replacement.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity = 10000);

  void push(TransitionRecord record);
  std::vector<TransitionRecord> sample(std::size_t batch_size, std::mt19937_64& rng) const;
  /// Buffer slots a sample would draw; exposed for tests.
  std::vector<std::size_t> sample_slots(std::size_t batch_size, std::mt19937_64& rng) const;

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const TransitionRecord& operator[](std::size_t i) const { return records_[i]; }

private:
  std::size_t capacity_;
  std::deque<TransitionRecord> records_;
};

/// Forward pass plus i.i.d. N(0, noise_sigma^2) noise on every coordinate.
RawAction act(const nn::Mlp& actor, std::span<const double> state, double noise_sigma, std::mt19937_64& rng);

/// w * sigmoid(raw); k and n rounded half away from zero and clamped to
/// [1, w_k] / [1, w_n].
Action to_env_action(std::span<const double> raw, const ActionBounds& bounds);

double critic_value(const nn::Mlp& critic, std::span<const double> state, std::span<const double> action);

/// r for terminal records, else r + gamma * Q(s', pi(s')) using the networks given.
double critic_target(const TransitionRecord& record, const nn::Mlp& actor, const nn::Mlp& critic, double gamma);

/// mean (Q(s, a_raw) - target)^2; adds its gradient into `grad` when non-empty.
double critic_loss(const nn::Mlp& critic, std::span<const TransitionRecord> batch,
                   std::span<const double> targets, std::span<double> grad = {});

/// -mean Q(s, pi(s)); adds the gradient w.r.t. the actor parameters into `grad`
/// when non-empty. The critic is read only.
double actor_loss(const nn::Mlp& actor, const nn::Mlp& critic, std::span<const std::vector<double>> states,
                  std::span<double> grad = {});

/// One optimizer step on the critic loss; returns the pre-step loss.
double update_critic(nn::Mlp& critic, nn::Adam& optimizer, std::span<const TransitionRecord> batch,
                     std::span<const double> targets);

/// One optimizer step on the actor loss through a frozen critic; returns the
/// pre-step loss.
double update_actor(nn::Mlp& actor, nn::Adam& optimizer, const nn::Mlp& critic,
                    std::span<const std::vector<double>> states);

/// target <- (1 - tau) * target + tau * online.
void soft_update(std::span<double> target, std::span<const double> online, double tau);

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
};

class DdpgAgent {
public:
  DdpgAgent(std::size_t state_dim, AgentConfig cfg, ActionBounds bounds);

  RawAction act(std::span<const double> state, double noise_sigma, std::mt19937_64& rng) const {
    return mixann::act(actor_, state, noise_sigma, rng);
  }
  /// Greedy (noise-free) environment action.
  Action policy_action(std::span<const double> state) const;

  void remember(TransitionRecord record) { buffer_.push(std::move(record)); }
  bool ready() const { return buffer_.size() >= static_cast<std::size_t>(cfg_.batch_size); }
  /// One critic + actor update on a sampled batch, then target soft update.
  UpdateStats train_step(std::mt19937_64& rng);
  std::int64_t updates() const noexcept { return updates_; }

  nn::Mlp& actor() noexcept { return actor_; }
  nn::Mlp& critic() noexcept { return critic_; }
  const nn::Mlp& actor() const noexcept { return actor_; }
  const nn::Mlp& critic() const noexcept { return critic_; }
  const nn::Mlp& actor_target() const noexcept { return actor_target_; }
  const nn::Mlp& critic_target() const noexcept { return critic_target_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  const AgentConfig& config() const noexcept { return cfg_; }
  const ActionBounds& bounds() const noexcept { return bounds_; }
  /// Copies online weights into the target networks.
  void sync_targets();

  /// Versioned little-endian file holding actor and critic weights.
  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

private:
  AgentConfig cfg_;
  ActionBounds bounds_;
  nn::Mlp actor_;
  nn::Mlp critic_;
  nn::Mlp actor_target_;
  nn::Mlp critic_target_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
  ReplayBuffer buffer_;
  std::int64_t updates_ = 0;
};

inline constexpr std::uint32_t kAgentFileVersion = 1;

}  // namespace mixann
