#include "mixann/agent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mixann/error.hpp"

namespace mixann {

void ActionBounds::validate() const {
  for (double v : w)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidConfig, "action bounds must be positive");
}

void AgentConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidConfig, "agent.gamma must lie in [0,1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidConfig, "agent.tau must lie in (0,1]");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0))
    throw Error(ErrorCode::InvalidConfig, "agent learning rates must be > 0");
  if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "agent.batch_size must be >= 1");
  if (!(noise_sigma >= 0.0) || !(noise_sigma_final >= 0.0))
    throw Error(ErrorCode::InvalidConfig, "agent noise must be >= 0");
  if (updates_per_step < 1) throw Error(ErrorCode::InvalidConfig, "agent.updates_per_step must be >= 1");
  if (buffer_capacity < batch_size)
    throw Error(ErrorCode::InvalidConfig, "agent.buffer_capacity must be >= batch_size");
  if (hidden.empty()) throw Error(ErrorCode::InvalidConfig, "agent.hidden must list at least one width");
  for (auto h : hidden)
    if (h < 1) throw Error(ErrorCode::InvalidConfig, "agent hidden widths must be >= 1");
}

// --- replay buffer ------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error(ErrorCode::InvalidConfig, "replay capacity must be positive");
}

void ReplayBuffer::push(TransitionRecord record) {
  if (records_.size() == capacity_) records_.pop_front();
  records_.push_back(std::move(record));
}

std::vector<std::size_t> ReplayBuffer::sample_slots(std::size_t batch_size, std::mt19937_64& rng) const {
  if (batch_size > records_.size()) {
    throw Error(ErrorCode::BufferTooSmall, "batch of " + std::to_string(batch_size) + " from a buffer of " +
                                               std::to_string(records_.size()));
  }
  std::vector<std::size_t> slots(records_.size());
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, slots.size() - 1);
    std::swap(slots[i], slots[pick(rng)]);
  }
  slots.resize(batch_size);
  return slots;
}

std::vector<TransitionRecord> ReplayBuffer::sample(std::size_t batch_size, std::mt19937_64& rng) const {
  std::vector<TransitionRecord> out;
  out.reserve(batch_size);
  for (std::size_t slot : sample_slots(batch_size, rng)) out.push_back(records_[slot]);
  return out;
}

// --- policy and transform -------------------------------------------------

RawAction act(const nn::Mlp& actor, std::span<const double> state, double noise_sigma, std::mt19937_64& rng) {
  if (actor.output_dim() != kActionDim) throw Error(ErrorCode::ShapeMismatch, "actor must emit 4 values");
  const auto out = actor.forward(state);
  RawAction raw{};
  std::copy(out.begin(), out.end(), raw.begin());
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& v : raw) v += noise(rng);
  }
  return raw;
}

Action to_env_action(std::span<const double> raw, const ActionBounds& bounds) {
  if (raw.size() != kActionDim) throw Error(ErrorCode::DimensionMismatch, "raw action must have 4 entries");
  std::array<double, kActionDim> a{};
  for (std::size_t i = 0; i < kActionDim; ++i) a[i] = bounds.w[i] * nn::sigmoid(raw[i]);
  auto to_count = [](double value, double bound) {
    const auto upper = std::max<long long>(1, static_cast<long long>(std::floor(bound)));
    return static_cast<int>(std::clamp<long long>(round_half_away(value), 1, upper));
  };
  Action act;
  act.k = to_count(a[0], bounds.w[0]);
  act.alpha = std::clamp(a[1], 0.0, 1.0);
  act.n = to_count(a[2], bounds.w[2]);
  act.epsilon = std::clamp(a[3], 0.0, 1.0);
  return act;
}

// --- losses ---------------------------------------------------------------

namespace {

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double critic_value(const nn::Mlp& critic, std::span<const double> state, std::span<const double> action) {
  return critic.forward(concat(state, action))[0];
}

double critic_target(const TransitionRecord& record, const nn::Mlp& actor, const nn::Mlp& critic, double gamma) {
  if (record.terminal || gamma == 0.0) return record.r;
  const auto next_action = actor.forward(record.s_next);
  return record.r + gamma * critic_value(critic, record.s_next, next_action);
}

double critic_loss(const nn::Mlp& critic, std::span<const TransitionRecord> batch, std::span<const double> targets,
                   std::span<double> grad) {
  if (batch.empty()) throw Error(ErrorCode::EmptyBatch, "critic update with an empty batch");
  if (targets.size() != batch.size()) throw Error(ErrorCode::LengthMismatch, "one target per record required");
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  nn::Mlp::Tape tape;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double q = critic.forward(concat(batch[i].s, batch[i].a_raw), tape)[0];
    const double diff = q - targets[i];
    loss += diff * diff;
    if (!grad.empty()) {
      const double dq = 2.0 * diff * inv_n;
      critic.backward(tape, std::span<const double>(&dq, 1), grad);
    }
  }
  return loss * inv_n;
}

double actor_loss(const nn::Mlp& actor, const nn::Mlp& critic, std::span<const std::vector<double>> states,
                  std::span<double> grad) {
  if (states.empty()) throw Error(ErrorCode::EmptyBatch, "actor update with an empty batch");
  const double inv_n = 1.0 / static_cast<double>(states.size());
  std::vector<double> critic_scratch;
  if (!grad.empty()) critic_scratch.assign(critic.param_count(), 0.0);
  double loss = 0.0;
  nn::Mlp::Tape actor_tape;
  nn::Mlp::Tape critic_tape;
  for (const auto& s : states) {
    const auto raw = actor.forward(s, actor_tape);
    const double q = critic.forward(concat(s, raw), critic_tape)[0];
    loss -= q;
    if (!grad.empty()) {
      const double dq = -inv_n;
      const auto d_input = critic.backward(critic_tape, std::span<const double>(&dq, 1), critic_scratch);
      const auto d_action = std::span<const double>(d_input).subspan(s.size());
      actor.backward(actor_tape, d_action, grad);
    }
  }
  return loss * inv_n;
}

double update_critic(nn::Mlp& critic, nn::Adam& optimizer, std::span<const TransitionRecord> batch,
                     std::span<const double> targets) {
  std::vector<double> grad(critic.param_count(), 0.0);
  const double loss = critic_loss(critic, batch, targets, grad);
  optimizer.step(critic.params(), grad);
  return loss;
}

double update_actor(nn::Mlp& actor, nn::Adam& optimizer, const nn::Mlp& critic,
                    std::span<const std::vector<double>> states) {
  std::vector<double> grad(actor.param_count(), 0.0);
  const double loss = actor_loss(actor, critic, states, grad);
  optimizer.step(actor.params(), grad);
  return loss;
}

void soft_update(std::span<double> target, std::span<const double> online, double tau) {
  if (target.size() != online.size()) throw Error(ErrorCode::ShapeMismatch, "soft update of mismatched networks");
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = (1.0 - tau) * target[i] + tau * online[i];
}

// --- agent ----------------------------------------------------------------

namespace {

nn::Mlp make_net(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::vector<std::size_t> widths{in};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out);
  return nn::Mlp(std::move(widths));
}

}  // namespace

DdpgAgent::DdpgAgent(std::size_t state_dim, AgentConfig cfg, ActionBounds bounds)
    : cfg_(std::move(cfg)), bounds_(bounds), buffer_(static_cast<std::size_t>(std::max(cfg_.buffer_capacity, 1))) {
  cfg_.validate();
  bounds_.validate();
  if (state_dim == 0) throw Error(ErrorCode::DimensionMismatch, "state dimension must be positive");
  std::mt19937_64 init_rng(cfg_.seed);
  actor_ = make_net(state_dim, cfg_.hidden, kActionDim);
  critic_ = make_net(state_dim + kActionDim, cfg_.hidden, 1);
  actor_.init_uniform_fan_in(init_rng);
  critic_.init_uniform_fan_in(init_rng);
  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_opt_ = nn::Adam(actor_.param_count(), {cfg_.actor_lr});
  critic_opt_ = nn::Adam(critic_.param_count(), {cfg_.critic_lr});
}

Action DdpgAgent::policy_action(std::span<const double> state) const {
  const auto raw = actor_.forward(state);
  return to_env_action(raw, bounds_);
}

void DdpgAgent::sync_targets() {
  actor_target_ = actor_;
  critic_target_ = critic_;
}

UpdateStats DdpgAgent::train_step(std::mt19937_64& rng) {
  const auto batch = buffer_.sample(static_cast<std::size_t>(cfg_.batch_size), rng);
  const nn::Mlp& bootstrap_actor = cfg_.use_targets ? actor_target_ : actor_;
  const nn::Mlp& bootstrap_critic = cfg_.use_targets ? critic_target_ : critic_;
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const auto& rec : batch) targets.push_back(mixann::critic_target(rec, bootstrap_actor, bootstrap_critic, cfg_.gamma));

  UpdateStats stats;
  stats.critic_loss = update_critic(critic_, critic_opt_, batch, targets);
  std::vector<std::vector<double>> states;
  states.reserve(batch.size());
  for (const auto& rec : batch) states.push_back(rec.s);
  stats.actor_loss = update_actor(actor_, actor_opt_, critic_, states);
  if (cfg_.use_targets) {
    soft_update(actor_target_.params(), actor_.params(), cfg_.tau);
    soft_update(critic_target_.params(), critic_.params(), cfg_.tau);
  }
  ++updates_;
  return stats;
}

// --- serialization ----------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'M', 'X', 'A', 'N', 'A', 'G', 'N', 'T'};

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <typename T>
void write_le(std::ostream& out, T value) {
  const T le = to_little_endian(value);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T raw{};
  in.read(reinterpret_cast<char*>(&raw), sizeof(T));
  if (!in) throw Error(ErrorCode::IoError, "truncated agent file");
  return to_little_endian(raw);
}

void write_net(std::ostream& out, const nn::Mlp& net) {
  write_le<std::uint64_t>(out, net.widths().size());
  for (auto w : net.widths()) write_le<std::uint64_t>(out, w);
  write_le<std::uint64_t>(out, net.param_count());
  for (double p : net.params()) write_le<double>(out, p);
}

void read_net(std::istream& in, nn::Mlp& net) {
  const auto layers = read_le<std::uint64_t>(in);
  std::vector<std::size_t> widths;
  for (std::uint64_t i = 0; i < layers; ++i) widths.push_back(read_le<std::uint64_t>(in));
  if (widths != net.widths()) throw Error(ErrorCode::ShapeMismatch, "stored network shape differs from the agent");
  const auto count = read_le<std::uint64_t>(in);
  if (count != net.param_count()) throw Error(ErrorCode::ShapeMismatch, "stored parameter count differs");
  for (auto& p : net.params()) p = read_le<double>(in);
}

}  // namespace

void DdpgAgent::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, kAgentFileVersion);
  write_net(out, actor_);
  write_net(out, critic_);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void DdpgAgent::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
    throw Error(ErrorCode::IoError, path.string() + " is not an agent file");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kAgentFileVersion) {
    throw Error(ErrorCode::VersionMismatch, "agent file version " + std::to_string(version) + ", expected " +
                                                std::to_string(kAgentFileVersion));
  }
  nn::Mlp actor = actor_;
  nn::Mlp critic = critic_;
  read_net(in, actor);
  read_net(in, critic);
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  sync_targets();
}

}  // namespace mixann
