#include "mixann/config.hpp"

#include <fstream>
#include <set>

#include "mixann/error.hpp"
#include "mixann/log.hpp"

namespace mixann {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "'" + key + "' " + what);
}

// Reads keys from one JSON object and remembers which were consumed, so
// leftovers can be rejected.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(display(), "must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = get(key);
    if (!v) fail(full(key), "is required");
    return *v;
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double real(const std::string& key, double fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(full(key), "must be a number");
    return v->get<double>();
  }

  long long integer(const std::string& key, long long fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    return as_integer(*v, full(key));
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(full(key), "must be true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(full(key), "must be a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(full(key), "is not a recognized key");
    }
  }

  static long long as_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<long long>();
  }

private:
  std::string display() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) fail(key, what);
}

int bounded_int(ObjectReader& r, const std::string& key, long long fallback, long long lo) {
  const long long v = r.integer(key, fallback);
  check(v >= lo && v <= 1'000'000'000, r.full(key), "must be >= " + std::to_string(lo));
  return static_cast<int>(v);
}

std::vector<std::size_t> widths(const json* v, const std::string& key, std::vector<std::size_t> fallback) {
  if (!v) return fallback;
  check(v->is_array() && !v->empty(), key, "must be a non-empty list of widths");
  std::vector<std::size_t> out;
  for (const auto& w : *v) {
    const long long x = ObjectReader::as_integer(w, key);
    check(x >= 1, key, "widths must be >= 1");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

ClassifierSpec parse_classifier(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  ClassifierSpec spec;
  const json& kind = r.require("kind");
  check(kind.is_string(), r.full("kind"), "must be \"knn\" or \"mlp\"");
  try {
    spec.kind = classifier_kind_from_string(kind.get<std::string>());
  } catch (const Error&) {
    fail(r.full("kind"), "must be \"knn\" or \"mlp\"");
  }
  spec.knn_k = bounded_int(r, "knn_k", spec.knn_k, 1);
  spec.mlp_layers = widths(r.get("mlp_layers"), r.full("mlp_layers"), spec.mlp_layers);
  spec.mlp_learning_rate = r.real("mlp_learning_rate", spec.mlp_learning_rate);
  check(spec.mlp_learning_rate > 0.0, r.full("mlp_learning_rate"), "must be > 0");
  spec.mlp_epochs_initial = bounded_int(r, "mlp_epochs_initial", spec.mlp_epochs_initial, 1);
  spec.mlp_steps_per_update = bounded_int(r, "mlp_steps_per_update", spec.mlp_steps_per_update, 1);
  spec.mlp_batch_size = bounded_int(r, "mlp_batch_size", spec.mlp_batch_size, 1);
  r.finish();
  return spec;
}

}  // namespace

AppConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  ObjectReader root(doc, "");
  AppConfig cfg;

  {
    ObjectReader ds(root.require("dataset"), "dataset");
    const json* csv = ds.get("csv");
    const json* toy = ds.get("toy");
    check((csv != nullptr) != (toy != nullptr), "dataset", "must name exactly one of 'csv' or 'toy'");
    if (csv) {
      check(csv->is_string(), "dataset.csv", "must be a path string");
      std::filesystem::path p = csv->get<std::string>();
      cfg.dataset.csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else {
      ObjectReader t(*toy, "dataset.toy");
      ToySpec spec;
      spec.majority_count = bounded_int(t, "majority_count", spec.majority_count, 1);
      spec.minority_count = bounded_int(t, "minority_count", spec.minority_count, 1);
      spec.minority_clusters = bounded_int(t, "minority_clusters", spec.minority_clusters, 1);
      check(spec.minority_clusters <= spec.minority_count, "dataset.toy.minority_clusters",
            "must not exceed minority_count");
      spec.spread = t.real("spread", spec.spread);
      check(spec.spread > 0.0, "dataset.toy.spread", "must be > 0");
      const long long seed = t.integer("seed", static_cast<long long>(spec.seed));
      check(seed >= 0, "dataset.toy.seed", "must be >= 0");
      spec.seed = static_cast<std::uint64_t>(seed);
      t.finish();
      cfg.dataset.toy = spec;
    }
    ds.finish();
  }

  if (const json* s = root.get("split")) {
    ObjectReader r(*s, "split");
    cfg.split.test_fraction = r.real("test_fraction", cfg.split.test_fraction);
    check(cfg.split.test_fraction > 0.0 && cfg.split.test_fraction < 1.0, "split.test_fraction", "must lie in (0,1)");
    cfg.split.val_fraction_of_train = r.real("val_fraction_of_train", cfg.split.val_fraction_of_train);
    check(cfg.split.val_fraction_of_train > 0.0 && cfg.split.val_fraction_of_train < 1.0,
          "split.val_fraction_of_train", "must lie in (0,1)");
    cfg.split.stratified = r.boolean("stratified", cfg.split.stratified);
    r.finish();
  }

  {
    const json& seeds = root.require("seeds");
    check(seeds.is_array() && !seeds.empty(), "seeds", "must be a non-empty list of integers");
    for (const auto& s : seeds) {
      const long long v = ObjectReader::as_integer(s, "seeds");
      check(v >= 0, "seeds", "entries must be >= 0");
      cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    }
  }

  {
    const json& methods = root.require("methods");
    check(methods.is_array() && !methods.empty(), "methods", "must be a non-empty list of method names");
    for (const auto& m : methods) {
      check(m.is_string(), "methods", "entries must be strings");
      try {
        cfg.methods.push_back(method_from_string(m.get<std::string>()));
      } catch (const Error&) {
        fail("methods", "contains unknown method '" + m.get<std::string>() +
                            "' (expected random|smote|borderline_smote|adasyn|mixboost|mixann|none)");
      }
    }
  }

  {
    const json& cls = root.require("classifiers");
    check(cls.is_array() && !cls.empty(), "classifiers", "must be a non-empty list");
    for (std::size_t i = 0; i < cls.size(); ++i)
      cfg.classifiers.push_back(parse_classifier(cls[i], "classifiers[" + std::to_string(i) + "]"));
  }

  if (const json* o = root.get("oversample")) {
    ObjectReader r(*o, "oversample");
    OversampleRequest req;
    check(r.has("n_synthetic"), "oversample.n_synthetic", "is required");
    req.n_synthetic = bounded_int(r, "n_synthetic", 0, 1);
    req.k_neighbors = bounded_int(r, "k_neighbors", req.k_neighbors, 1);
    r.finish();
    cfg.oversample = req;
  }
  for (Method m : cfg.methods) {
    if (m != Method::None && m != Method::Mixann && !cfg.oversample)
      fail("oversample", "is required when baseline method '" + to_string(m) + "' is listed");
  }

  if (const json* e = root.get("env")) {
    ObjectReader r(*e, "env");
    cfg.env.K = bounded_int(r, "K", cfg.env.K, 1);
    cfg.env.N_max = bounded_int(r, "N_max", cfg.env.N_max, 1);
    cfg.env.eta = r.real("eta", cfg.env.eta);
    check(cfg.env.eta >= 0.0 && cfg.env.eta <= 1.0, "env.eta", "must lie in [0,1]");
    cfg.env.lambda = r.real("lambda", cfg.env.lambda);
    check(cfg.env.lambda > 0.0, "env.lambda", "must be > 0");
    cfg.env.m_win = bounded_int(r, "m_win", cfg.env.m_win, 2);
    cfg.env.T_max = bounded_int(r, "T_max", cfg.env.T_max, 1);
    r.finish();
  }
  if (MixConfig{cfg.env.eta}.eta_outside_nominal_range()) {
    log::warning("env.eta = " + std::to_string(cfg.env.eta) +
                 " lies outside [0.5, 1]; mix-up labels will follow the nearer source less often");
  }

  if (const json* a = root.get("agent")) {
    ObjectReader r(*a, "agent");
    auto& ag = cfg.agent;
    ag.gamma = r.real("gamma", ag.gamma);
    check(ag.gamma >= 0.0 && ag.gamma < 1.0, "agent.gamma", "must lie in [0,1)");
    ag.actor_lr = r.real("actor_lr", ag.actor_lr);
    check(ag.actor_lr > 0.0, "agent.actor_lr", "must be > 0");
    ag.critic_lr = r.real("critic_lr", ag.critic_lr);
    check(ag.critic_lr > 0.0, "agent.critic_lr", "must be > 0");
    ag.batch_size = bounded_int(r, "batch_size", ag.batch_size, 1);
    ag.noise_sigma = r.real("noise_sigma", ag.noise_sigma);
    check(ag.noise_sigma >= 0.0, "agent.noise_sigma", "must be >= 0");
    ag.noise_sigma_final = r.real("noise_sigma_final", ag.noise_sigma_final);
    check(ag.noise_sigma_final >= 0.0, "agent.noise_sigma_final", "must be >= 0");
    ag.tau = r.real("tau", ag.tau);
    check(ag.tau > 0.0 && ag.tau <= 1.0, "agent.tau", "must lie in (0,1]");
    ag.use_targets = r.boolean("use_targets", ag.use_targets);
    ag.updates_per_step = bounded_int(r, "updates_per_step", ag.updates_per_step, 1);
    ag.buffer_capacity = bounded_int(r, "buffer_capacity", ag.buffer_capacity, 1);
    check(ag.buffer_capacity >= ag.batch_size, "agent.buffer_capacity", "must be >= agent.batch_size");
    ag.hidden = widths(r.get("hidden"), "agent.hidden", ag.hidden);
    r.finish();
  }

  if (const json* t = root.get("trainer")) {
    ObjectReader r(*t, "trainer");
    cfg.episodes = bounded_int(r, "episodes", cfg.episodes, 1);
    const std::string mode = r.string("reward_mode", to_string(cfg.reward_mode));
    try {
      cfg.reward_mode = reward_mode_from_string(mode);
    } catch (const Error&) {
      fail("trainer.reward_mode", "must be one of full|random|no_improvement|no_exploration");
    }
    cfg.rollouts = bounded_int(r, "rollouts", cfg.rollouts, 1);
    cfg.persist_classifier = r.boolean("persist_classifier", cfg.persist_classifier);
    r.finish();
  }

  if (const json* c = root.get("case_study")) {
    ObjectReader r(*c, "case_study");
    cfg.grid = bounded_int(r, "grid", cfg.grid, 2);
    r.finish();
  }

  cfg.output_dir = root.string("output_dir", cfg.output_dir.string());
  if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
  cfg.trace = root.boolean("trace", cfg.trace);
  root.finish();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

ordered_json config_to_json(const AppConfig& cfg) {
  ordered_json j;
  if (cfg.dataset.csv) {
    // Only the file name is echoed so reports do not depend on where the
    // config was loaded from.
    j["dataset"] = {{"csv", cfg.dataset.csv->filename().string()}};
  } else {
    const auto& t = *cfg.dataset.toy;
    j["dataset"]["toy"] = {{"majority_count", t.majority_count},
                           {"minority_count", t.minority_count},
                           {"minority_clusters", t.minority_clusters},
                           {"spread", t.spread},
                           {"seed", t.seed}};
  }
  j["split"] = {{"test_fraction", cfg.split.test_fraction},
                {"val_fraction_of_train", cfg.split.val_fraction_of_train},
                {"stratified", cfg.split.stratified}};
  j["seeds"] = cfg.seeds;
  ordered_json methods = ordered_json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  ordered_json cls = ordered_json::array();
  for (const auto& c : cfg.classifiers) {
    cls.push_back({{"kind", to_string(c.kind)},
                   {"knn_k", c.knn_k},
                   {"mlp_layers", c.mlp_layers},
                   {"mlp_learning_rate", c.mlp_learning_rate},
                   {"mlp_epochs_initial", c.mlp_epochs_initial},
                   {"mlp_steps_per_update", c.mlp_steps_per_update},
                   {"mlp_batch_size", c.mlp_batch_size}});
  }
  j["classifiers"] = cls;
  if (cfg.oversample) {
    j["oversample"] = {{"n_synthetic", cfg.oversample->n_synthetic}, {"k_neighbors", cfg.oversample->k_neighbors}};
  }
  j["env"] = {{"K", cfg.env.K},           {"N_max", cfg.env.N_max}, {"eta", cfg.env.eta},
              {"lambda", cfg.env.lambda}, {"m_win", cfg.env.m_win}, {"T_max", cfg.env.T_max}};
  const auto& a = cfg.agent;
  j["agent"] = {{"gamma", a.gamma},
                {"actor_lr", a.actor_lr},
                {"critic_lr", a.critic_lr},
                {"batch_size", a.batch_size},
                {"noise_sigma", a.noise_sigma},
                {"noise_sigma_final", a.noise_sigma_final},
                {"tau", a.tau},
                {"use_targets", a.use_targets},
                {"updates_per_step", a.updates_per_step},
                {"buffer_capacity", a.buffer_capacity},
                {"hidden", a.hidden}};
  j["trainer"] = {{"episodes", cfg.episodes},
                  {"reward_mode", to_string(cfg.reward_mode)},
                  {"rollouts", cfg.rollouts},
                  {"persist_classifier", cfg.persist_classifier}};
  j["case_study"] = {{"grid", cfg.grid}};
  j["trace"] = cfg.trace;
  return j;
}

Dataset load_dataset(const AppConfig& cfg) {
  if (cfg.dataset.csv) return load_csv(*cfg.dataset.csv);
  return make_toy(*cfg.dataset.toy);
}

ExperimentConfig experiment_config(const AppConfig& cfg, const ClassifierSpec& classifier) {
  ExperimentConfig ec;
  ec.train.env = cfg.env;
  ec.train.agent = cfg.agent;
  ec.train.classifier = classifier;
  ec.train.episodes = cfg.episodes;
  ec.train.reward_mode = cfg.reward_mode;
  ec.train.seeds = cfg.seeds;
  ec.train.persist_classifier = cfg.persist_classifier;
  ec.train.rollouts = cfg.rollouts;
  ec.split = cfg.split;
  if (cfg.oversample) ec.oversample = *cfg.oversample;
  ec.keep_trace = cfg.trace;
  return ec;
}

}  // namespace mixann
