// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   acceptance [--only N] <cli> <toy_config> <cli_data_dir> <work_dir>
//
// Without the paths only the in-process criteria (1-7, 10) are meaningful.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "mixann/agent.hpp"
#include "mixann/baselines.hpp"
#include "mixann/config.hpp"
#include "mixann/env.hpp"
#include "mixann/log.hpp"
#include "mixann/mixup.hpp"
#include "mixann/neighbors.hpp"
#include "mixann/trainer.hpp"
#include "oracles.hpp"
#include "stubs.hpp"

namespace fs = std::filesystem;
using namespace mixann;

namespace {

struct Args {
  fs::path cli;
  fs::path toy_config;
  fs::path data;
  fs::path work;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures without stopping at the first one.
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures == 0) return {true, summary + ", " + std::to_string(checks) + " checks"};
    return {false, std::to_string(failures) + "/" + std::to_string(checks) + " checks failed, first: " + first};
  }
};

std::string sci(double v) {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(2);
  os << v;
  return os.str();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- 1

Outcome neighbors_oracle() {
  Tally t;
  std::mt19937_64 rng(1001);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t d = 1 + rng() % 8;
    const int grid = inst % 2 == 0 ? 3 : 0;  // integer grids force ties
    auto data = oracle::random_dataset(rng, n, d, 0.3, grid);
    NeighborIndex idx(data);
    const auto pts = oracle::features(data);
    const auto labels = data.labels();
    const auto query = oracle::random_dataset(rng, 1, d, 0.5, grid)[0].features;
    const std::size_t k = 1 + rng() % (n + 5);
    const auto expect = oracle::sorted_neighbors(pts, query, oracle::all_indices(n), k);
    const auto got = idx.k_nearest(query, k);
    bool same = got.size() == expect.size();
    for (std::size_t i = 0; same && i < got.size(); ++i)
      same = got[i].index == expect[i].second && got[i].distance == expect[i].first;
    t.check(same, "k_nearest instance " + std::to_string(inst));
    for (Label l : {0, 1}) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == l) cand.push_back(i);
      if (cand.empty()) continue;
      const auto want = oracle::sorted_neighbors(pts, query, cand, 1).front();
      const auto nb = idx.nearest_with_label(query, l);
      t.check(nb.index == want.second && nb.distance == want.first,
              "nearest_with_label instance " + std::to_string(inst));
    }
  }
  return t.outcome("200 instances");
}

// ---------------------------------------------------------------- 2

Dataset baseline_train(std::mt19937_64& rng) {
  for (;;) {
    auto d = oracle::random_dataset(rng, 20 + rng() % 60, 1 + rng() % 4, 0.25, rng() % 2 ? 3 : 0);
    if (d.count(1) >= 2 && d.count(0) >= 1) return d;
  }
}

Outcome baselines_oracle() {
  Tally t;
  std::mt19937_64 rng(2002);
  for (int inst = 0; inst < 50; ++inst) {
    auto d = baseline_train(rng);
    const int k = 1 + static_cast<int>(rng() % 6);
    const auto table = oracle::smote_neighbors(d, k);
    t.check(minority_neighbor_table(d, k) == table, "smote neighbor table " + std::to_string(inst));
    const auto minority = d.indices_of(1);
    const auto traced = smote_traced(d, {40, k, rng()});
    t.check(traced.size() == 40, "smote size");
    for (const auto& ts : traced) {
      const auto pos = static_cast<std::size_t>(std::find(minority.begin(), minority.end(), ts.base) - minority.begin());
      const bool ok = pos < minority.size() &&
                      std::find(table[pos].begin(), table[pos].end(), ts.partner) != table[pos].end();
      t.check(ok, "smote partner outside the oracle neighbor list");
    }
  }
  for (int inst = 0; inst < 50; ++inst) {
    auto d = baseline_train(rng);
    const int k = 1 + static_cast<int>(rng() % 8);
    const auto expect = oracle::borderline(d, k);
    const auto got = borderline_categories(d, k);
    bool same = got.size() == expect.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) same = static_cast<int>(got[i]) == expect[i];
    t.check(same, "borderline categories " + std::to_string(inst));
  }
  for (int inst = 0; inst < 50; ++inst) {
    auto d = baseline_train(rng);
    const int k = 1 + static_cast<int>(rng() % 8);
    const int n = 1 + static_cast<int>(rng() % 300);
    const auto expect = oracle::allocation(oracle::majority_fractions(d, k), static_cast<std::size_t>(n));
    const auto got = adasyn_allocation(d, k, n);
    t.check(got == expect, "adasyn allocation " + std::to_string(inst));
    t.check(std::accumulate(got.begin(), got.end(), std::size_t{0}) == static_cast<std::size_t>(n),
            "adasyn allocation sum " + std::to_string(inst));
    t.check(adasyn(d, {n, k, 5}).size() == static_cast<std::size_t>(n), "adasyn output size");
  }
  return t.outcome("3 x 50 datasets");
}

// ---------------------------------------------------------------- 3

Outcome mixup_exactness() {
  Tally t;
  t.check(mix_label(0, 1, 0.3, 0.3) == 0, "alpha == eta keeps y0");
  t.check(mix_label(1, 0, 0.5, 0.5) == 1, "alpha == eta keeps y0");
  t.check(mix_label(0, 1, std::nextafter(0.3, 0.0), 0.3) == 1, "alpha just below eta gives y1");
  t.check(mix_label(1, 0, 1.0, 1.0) == 1, "alpha == eta == 1");
  t.check(mix_label(1, 0, 0.0, 0.0) == 1, "alpha == eta == 0");
  const auto f = mix_features(std::vector<double>{1, 2}, std::vector<double>{3, 6}, 0.25);
  t.check(std::abs(f[0] - 2.5) <= 1e-12 && std::abs(f[1] - 5.0) <= 1e-12, "worked feature mix");
  t.check(mix_features(std::vector<double>{1, 2}, std::vector<double>{3, 6}, 1.0) == std::vector<double>{1, 2},
          "alpha 1 copies x0");
  t.check(mix_features(std::vector<double>{1, 2}, std::vector<double>{3, 6}, 0.0) == std::vector<double>{3, 6},
          "alpha 0 copies x1");

  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 1 + rng() % 8;
    SourcePair pair;
    for (std::size_t j = 0; j < d; ++j) {
      pair.x0.features.push_back(normal(rng));
      pair.x1.features.push_back(normal(rng));
    }
    pair.x0.label = static_cast<Label>(rng() % 2);
    pair.x1.label = 1 - pair.x0.label;
    const double alpha = i % 10 == 0 ? 0.3 : u(rng);
    const double eta = i % 10 == 0 ? 0.3 : u(rng);
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto out = synthesize(pair, alpha, n, {eta});
    const Label want = alpha >= eta ? pair.x0.label : pair.x1.label;
    t.check(out.size() == static_cast<std::size_t>(n), "synthesize count");
    for (const auto& s : out) {
      t.check(s.label == want, "mixed label");
      double err = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        err = std::max(err, std::abs(s.features[j] - (alpha * pair.x0.features[j] + (1 - alpha) * pair.x1.features[j])));
      t.check(err <= 1e-12, "mixed features");
      t.check(s == out.front(), "copies identical");
    }
  }
  return t.outcome("boundary cases + 1e4 random mixes");
}

// ---------------------------------------------------------------- 4

Outcome gradient_checks() {
  std::mt19937_64 rng(4004);
  double worst_mlp = 0, worst_critic = 0, worst_actor = 0;
  for (int i = 0; i < 20; ++i) {
    worst_mlp = std::max(worst_mlp, gradcheck::mlp_check(rng));
    worst_critic = std::max(worst_critic, gradcheck::critic_check(rng));
    worst_actor = std::max(worst_actor, gradcheck::actor_check(rng));
  }
  const double worst = std::max({worst_mlp, worst_critic, worst_actor});
  return {worst <= 1e-4, "worst relative error mlp " + sci(worst_mlp) + ", critic " + sci(worst_critic) +
                             ", actor " + sci(worst_actor)};
}

// ---------------------------------------------------------------- 5

Dataset line_data() {
  return Dataset({{{0, 0}, 0}, {{1, 0}, 0}, {{2, 0}, 0}, {{3, 0}, 1}, {{4, 0}, 1}, {{5, 0}, 0}}, 2);
}

Outcome reward_formula() {
  Tally t;
  EnvConfig cfg;
  cfg.K = 5;
  {
    MixupEnv env(line_data(), stub::scripted({0.72}), cfg);
    env.reset(stub::constant(2, 0.5), 0.70);
    std::mt19937_64 rng(1);
    auto out = env.step(env.initial_state(rng), {2, 0.5, 1, 0.1}, rng);
    t.check(std::abs(out.reward - 0.05) <= 1e-12, "lambda 10, delta 0.02, C 0.25 gives 0.05");
  }
  {
    MixupEnv env(line_data(), stub::scripted({0.6}), cfg);
    env.reset(stub::constant(2, 0.5), 0.6);
    std::mt19937_64 rng(2);
    auto s = env.initial_state(rng);
    for (int i = 0; i < 10; ++i) {
      auto out = env.step(s, {3, 0.4, 2, 0.0}, rng);
      t.check(out.reward == 0.0, "frozen score gives zero reward");
      s = out.next_state;
    }
  }
  // Random scripts and classifier surfaces against a hand-computed reward.
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto data = oracle::random_dataset(rng, 30, 2, 0.3);
    if (!data.has_both_classes()) continue;
    EnvConfig c;
    c.K = 6;
    c.lambda = 1.0 + 19.0 * u(rng);
    c.m_win = 2 + static_cast<int>(rng() % 5);
    std::vector<double> script;
    for (int i = 0; i < 8; ++i) script.push_back(u(rng));
    const double a = u(rng) - 0.5, b = u(rng) - 0.5;
    auto prob = [a, b](std::span<const double> x) { return 1.0 / (1.0 + std::exp(-(a * x[0] + b * x[1]))); };
    MixupEnv env(data, stub::scripted(script), c);
    const double baseline0 = u(rng);
    env.reset(std::make_unique<stub::FnClassifier>(2, prob), baseline0);
    std::vector<double> history;
    auto s = env.initial_state(rng);
    for (std::size_t step = 0; step < script.size(); ++step) {
      Action act{1 + static_cast<int>(rng() % 6), u(rng), 1 + static_cast<int>(rng() % 5), 0.0};
      auto out = env.step(s, act, rng);
      double base = baseline0;
      if (!history.empty()) {
        const std::size_t m = std::min<std::size_t>(history.size(), static_cast<std::size_t>(c.m_win));
        base = std::accumulate(history.end() - static_cast<std::ptrdiff_t>(m), history.end(), 0.0) / m;
      }
      const double delta = script[step] - base;
      history.push_back(script[step]);
      std::vector<std::vector<double>> pts;
      for (std::size_t i = 0; i < env.pool().size(); ++i) {
        auto p = env.pool().point(i);
        pts.emplace_back(p.begin(), p.end());
      }
      const auto nb = oracle::sorted_neighbors(pts, out.synthetics[0].features, oracle::all_indices(pts.size()),
                                               static_cast<std::size_t>(act.k));
      double conf = 0.0;
      for (const auto& [dist, i] : nb) conf += prob(pts[i]) * (1.0 - prob(pts[i]));
      conf /= static_cast<double>(nb.size());
      t.check(std::abs(out.reward - c.lambda * delta * conf) <= 1e-12, "random reward trial " + std::to_string(trial));
      s = out.next_state;
    }
  }
  return t.outcome("worked cases + 200 scripted episodes");
}

// ---------------------------------------------------------------- 6

Outcome action_transform() {
  Tally t;
  const ActionBounds w{{10, 1, 5, 1}};
  const auto zero = to_env_action(std::vector<double>{0, 0, 0, 0}, w);
  t.check(zero.k == 5 && zero.alpha == 0.5 && zero.n == 3 && zero.epsilon == 0.5, "raw zero gives (5, 0.5, 3, 0.5)");
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> wide(-1e6, 1e6);
  std::normal_distribution<double> normal(0.0, 4.0);
  EnvConfig env;
  for (int i = 0; i < 100000; ++i) {
    const double wk = static_cast<double>(1 + rng() % 25), wn = static_cast<double>(1 + rng() % 10);
    const ActionBounds b{{wk, 1.0, wn, 1.0}};
    std::vector<double> raw(4);
    for (auto& r : raw) r = i % 2 ? wide(rng) : normal(rng);
    const auto a = to_env_action(raw, b);
    const auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    const long long k = std::clamp<long long>(std::llround(wk * sig(raw[0])), 1, static_cast<long long>(wk));
    const long long n = std::clamp<long long>(std::llround(wn * sig(raw[2])), 1, static_cast<long long>(wn));
    bool ok = a.k == k && a.n == n;
    ok = ok && a.alpha >= 0.0 && a.alpha <= 1.0 && a.epsilon >= 0.0 && a.epsilon <= 1.0;
    ok = ok && std::abs(a.alpha - sig(raw[1])) <= 1e-15 && std::abs(a.epsilon - sig(raw[3])) <= 1e-15;
    t.check(ok, "fuzzed raw vector " + std::to_string(i));
  }
  return t.outcome("1e5 fuzzed raw vectors");
}

// ---------------------------------------------------------------- 7

Outcome agent_convergence() {
  const auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  const std::vector<double> state{0.3, -0.2, 0.5, 0.1};
  const int updates = 5000;
  std::string detail;
  bool all = true;
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
    AgentConfig cfg;
    cfg.seed = seed;
    DdpgAgent agent(state.size(), cfg, {});
    std::mt19937_64 rng(seed + 700);
    while (agent.updates() < updates) {
      TransitionRecord r;
      r.s = state;
      r.a_raw = agent.act(state, 0.3, rng);
      r.r = -std::abs(sigmoid(r.a_raw[1]) - 0.8);
      r.s_next = state;
      r.terminal = true;
      agent.remember(std::move(r));
      if (agent.ready()) agent.train_step(rng);
    }
    const double alpha = agent.policy_action(state).alpha;
    all = all && std::abs(alpha - 0.8) <= 0.05;
    detail += (detail.empty() ? "alpha " : ", ") + fixed(alpha);
  }
  return {all, detail + " after " + std::to_string(updates) + " updates"};
}

// ---------------------------------------------------------------- 8

Outcome toy_trend(const Args& args) {
  if (args.toy_config.empty()) return {false, "no toy config given"};
  const auto cfg = load_config(args.toy_config);
  const auto data = load_dataset(cfg);
  const auto ec = experiment_config(cfg, cfg.classifiers.at(0));
  const double none = run_experiment(ec, data, Method::None, 1).mean.f1;
  const double smote = run_experiment(ec, data, Method::Smote, 1).mean.f1;
  const auto mix = run_experiment(ec, data, Method::Mixann, 1);
  std::string per_seed;
  for (const auto& s : mix.per_seed) per_seed += (per_seed.empty() ? "" : " ") + fixed(s.scores.f1, 3);
  const bool ok = mix.mean.f1 >= none && mix.mean.f1 >= smote - 0.02;
  return {ok, "macro-F1 none " + fixed(none) + ", smote " + fixed(smote) + ", mixann " + fixed(mix.mean.f1) +
                  " (seeds " + per_seed + ")"};
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome cli_determinism(const Args& args) {
  if (args.cli.empty()) return {false, "no CLI path given"};
  Tally t;
  const fs::path cfg = args.data / "small.json";
  struct Verb {
    std::string name;
    std::string extra;
    std::string file;
  };
  const std::vector<Verb> verbs{{"benchmark", "", "report.json"},
                                {"sweep", "--param K --values 5 10", "sweep.json"},
                                {"ablation", "", "report.json"}};
  for (const auto& v : verbs) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = args.work / "determinism" / (v.name + std::to_string(run));
      fs::remove_all(out);
      const std::string cmd = "\"" + args.cli.string() + "\" -q --config \"" + cfg.string() + "\" --out \"" +
                              out.string() + "\" " + v.name + " " + v.extra;
      t.check(std::system(cmd.c_str()) == 0, v.name + " exit status");
      const auto text = slurp(out / v.file);
      t.check(!text.empty(), v.name + " wrote " + v.file);
      if (run == 0) first = text;
      else t.check(text == first, v.name + " rerun differs");
    }
  }
  return t.outcome("benchmark, sweep and ablation rerun");
}

// ---------------------------------------------------------------- 10

Outcome episode_discipline() {
  Tally t;
  ToySpec spec;
  spec.majority_count = 60;
  spec.minority_count = 15;
  const Dataset data = make_toy(spec);
  const auto parts = split(data, {});
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int episodes = 0;
  int terminated_by_eps = 0;
  while (episodes < 1000) {
    TrainConfig cfg;
    cfg.episodes = 25;
    cfg.env.T_max = 1 + static_cast<int>(rng() % 12);
    cfg.agent.batch_size = 16;
    cfg.agent.hidden = {16, 16};
    cfg.agent.noise_sigma = 1.0;
    cfg.agent.noise_sigma_final = 0.5;
    cfg.persist_classifier = false;
    const double eps_bias = u(rng);
    PolicyTrainer trainer(cfg, parts.train, parts.val, rng());
    trainer.set_agent_init([eps_bias](DdpgAgent& agent) {
      agent.actor().params()[agent.actor().param_count() - 1] = eps_bias;
      agent.sync_targets();
    });
    std::vector<std::uint64_t> starts;
    trainer.on_episode_start([&](int, const Classifier& c) { starts.push_back(c.digest()); });
    const auto policy = trainer.run();
    for (auto dg : starts) t.check(dg == policy.pretrained->digest(), "episode start differs from snapshot");

    std::size_t pos = 0;
    for (int len : policy.trace.episode_lengths) {
      int expected = cfg.env.T_max;
      bool by_eps = false;
      for (int s = 0; s < cfg.env.T_max && pos + s < policy.trace.steps.size(); ++s) {
        if (policy.trace.steps[pos + s].action.epsilon >= 0.5) {
          expected = s + 1;
          by_eps = true;
          break;
        }
      }
      t.check(len == expected, "episode " + std::to_string(episodes) + " length " + std::to_string(len) +
                                   ", expected " + std::to_string(expected));
      for (int s = 0; s < len; ++s) t.check(policy.trace.steps[pos + s].terminal == (s + 1 == len), "terminal flag");
      terminated_by_eps += by_eps;
      pos += static_cast<std::size_t>(len);
      ++episodes;
    }
    t.check(pos == policy.trace.steps.size(), "trace length");
  }
  return t.outcome(std::to_string(episodes) + " episodes, " + std::to_string(terminated_by_eps) +
                   " ended by epsilon");
}

}  // namespace

int main(int argc, char** argv) {
  Args args;
  int only = 0;
  std::vector<std::string> pos;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    else pos.push_back(a);
  }
  if (pos.size() > 0) args.cli = pos[0];
  if (pos.size() > 1) args.toy_config = pos[1];
  if (pos.size() > 2) args.data = pos[2];
  if (pos.size() > 3) args.work = pos[3];
  if (args.work.empty()) args.work = fs::temp_directory_path() / "mixann_acceptance";
  fs::create_directories(args.work);
  log::set_level(log::Level::Quiet);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "neighbor oracle", 10, neighbors_oracle},
      {2, "baseline oracles", 30, baselines_oracle},
      {3, "mix-up exactness", 0, mixup_exactness},
      {4, "gradient checks", 60, gradient_checks},
      {5, "reward formula", 0, reward_formula},
      {6, "action transform", 0, action_transform},
      {7, "agent convergence", 120, agent_convergence},
      {8, "toy trend", 600, [&] { return toy_trend(args); }},
      {9, "cli determinism", 0, [&] { return cli_determinism(args); }},
      {10, "episode discipline", 0, episode_discipline},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fixed(c.budget_s, 0) + " s budget";
    }
    failed += !o.pass;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << "  ("
              << o.detail << "; " << fixed(secs, 2) << " s)" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
