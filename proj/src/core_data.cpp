#include "mixann/core_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "mixann/error.hpp"

namespace mixann {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LabelError: return "LabelError";
    case ErrorCode::InsufficientClassSamples: return "InsufficientClassSamples";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::NoSuchLabel: return "NoSuchLabel";
    case ErrorCode::SingleClassData: return "SingleClassData";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::TooFewMinority: return "TooFewMinority";
    case ErrorCode::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::NoOppositeLabel: return "NoOppositeLabel";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::BufferTooSmall: return "BufferTooSmall";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Dataset::Dataset(std::vector<LabeledSample> samples, std::size_t dim)
    : samples_(std::move(samples)), dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "dataset dimension must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.features.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "sample " + std::to_string(i) + " has " + std::to_string(s.features.size()) +
                      " features, expected " + std::to_string(dim_));
    }
    if (s.label != 0 && s.label != 1) {
      throw Error(ErrorCode::LabelError, "sample " + std::to_string(i) + " label not in {0,1}");
    }
    for (double v : s.features) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::ParseError, "sample " + std::to_string(i) + " has a non-finite value");
      }
    }
  }
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      samples_.begin(), samples_.end(), [label](const LabeledSample& s) { return s.label == label; }));
}

std::vector<std::size_t> Dataset::indices_of(Label label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (samples_[i].label == label) out.push_back(i);
  return out;
}

std::vector<Label> Dataset::labels() const {
  std::vector<Label> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.label);
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<LabeledSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples_.at(i));
  return Dataset(std::move(out), dim_);
}

Dataset Dataset::concat(std::span<const LabeledSample> extra) const {
  std::vector<LabeledSample> out = samples_;
  out.insert(out.end(), extra.begin(), extra.end());
  return Dataset(std::move(out), dim_);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, 0, "missing header row");
  auto header = split_fields(line);
  if (header.size() < 2 || header.back() != "label") {
    throw ParseError(0, header.size(), "final header column must be named 'label'");
  }
  const std::size_t dim = header.size() - 1;

  std::vector<LabeledSample> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(row, std::min(fields.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    LabeledSample s;
    s.features.resize(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      if (!parse_double(fields[c], s.features[c])) {
        throw ParseError(row, c + 1, "non-numeric value '" + std::string(fields[c]) + "'");
      }
    }
    double label = 0.0;
    if (!parse_double(fields[dim], label) || (label != 0.0 && label != 1.0)) {
      throw Error(ErrorCode::LabelError, "row " + std::to_string(row) + ": label '" +
                                             std::string(fields[dim]) + "' not in {0,1}");
    }
    s.label = static_cast<Label>(label);
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), dim);
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::string text;
  for (std::size_t c = 0; c < dataset.dim(); ++c) text += "f" + std::to_string(c + 1) + ",";
  text += "label\n";
  for (const auto& s : dataset.samples()) {
    for (double v : s.features) {
      append_double(text, v);
      text += ',';
    }
    text += std::to_string(s.label);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::vector<std::size_t> largest_remainder(std::span<const double> weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> alloc(weights.size(), 0);
  if (!(sum > 0.0)) return alloc;
  std::vector<double> frac(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = weights[i] * static_cast<double>(total) / sum;
    alloc[i] = static_cast<std::size_t>(std::floor(quota));
    frac[i] = quota - std::floor(quota);
    assigned += alloc[i];
  }
  // Floating-point quotas can overshoot by one in pathological cases.
  for (std::size_t i = alloc.size(); assigned > total && i-- > 0;) {
    if (alloc[i] > 0) {
      --alloc[i];
      --assigned;
    }
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t j = 0; assigned < total; j = (j + 1) % order.size(), ++assigned) ++alloc[order[j]];
  return alloc;
}

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "test_fraction must lie in (0,1)");
  if (!(val_fraction_of_train > 0.0 && val_fraction_of_train < 1.0))
    throw Error(ErrorCode::InvalidConfig, "val_fraction_of_train must lie in (0,1)");
}

namespace {

std::vector<std::size_t> allocate_counts(std::span<const std::size_t> counts, std::size_t total) {
  std::vector<double> w(counts.begin(), counts.end());
  return mixann::largest_remainder(std::span<const double>(w), total);
}

// Moves one unit to every class that received zero from a class that was
// rounded up, so each partition holds every class.
void ensure_presence(std::vector<std::size_t>& alloc, std::span<const std::size_t> weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    if (alloc[i] > 0 || weights[i] == 0) continue;
    std::size_t donor = alloc.size();
    double best = 0.0;
    for (std::size_t j = 0; j < alloc.size(); ++j) {
      if (alloc[j] <= 1) continue;
      double surplus = static_cast<double>(alloc[j]) -
                       static_cast<double>(weights[j]) * static_cast<double>(total) / sum;
      if (donor == alloc.size() || surplus > best) {
        donor = j;
        best = surplus;
      }
    }
    if (donor == alloc.size()) return;
    --alloc[donor];
    ++alloc[i];
  }
}

}  // namespace

SplitIndices split_indices(const Dataset& dataset, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = dataset.size();
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "cannot split an empty dataset");

  const auto n_test = static_cast<std::size_t>(round_half_away(spec.test_fraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(
      round_half_away(spec.val_fraction_of_train * static_cast<double>(n - n_test)));
  if (n_test + n_val >= n) throw Error(ErrorCode::InvalidConfig, "split leaves no training samples");

  std::mt19937_64 rng(spec.seed);
  SplitIndices out;

  if (!spec.stratified) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test),
                   perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), perm.end());
  } else {
    std::vector<std::vector<std::size_t>> by_class = {dataset.indices_of(0), dataset.indices_of(1)};
    std::vector<std::size_t> counts;
    for (const auto& c : by_class) {
      if (!c.empty() && c.size() < 3) {
        throw Error(ErrorCode::InsufficientClassSamples,
                    "stratified split needs at least 3 samples per present class");
      }
      counts.push_back(c.size());
    }
    auto test_alloc = allocate_counts(counts, n_test);
    ensure_presence(test_alloc, counts, n_test);
    std::vector<std::size_t> rest(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) rest[c] = counts[c] - test_alloc[c];
    auto val_alloc = allocate_counts(rest, n_val);
    ensure_presence(val_alloc, rest, n_val);

    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (counts[c] == 0) continue;
      if (test_alloc[c] == 0 || val_alloc[c] == 0 || test_alloc[c] + val_alloc[c] >= counts[c]) {
        throw Error(ErrorCode::InsufficientClassSamples,
                    "class " + std::to_string(c) + " cannot appear in every partition");
      }
      auto& idx = by_class[c];
      std::shuffle(idx.begin(), idx.end(), rng);
      auto t_end = idx.begin() + static_cast<std::ptrdiff_t>(test_alloc[c]);
      auto v_end = t_end + static_cast<std::ptrdiff_t>(val_alloc[c]);
      out.test.insert(out.test.end(), idx.begin(), t_end);
      out.val.insert(out.val.end(), t_end, v_end);
      out.train.insert(out.train.end(), v_end, idx.end());
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Splits split(const Dataset& dataset, const SplitSpec& spec) {
  auto idx = split_indices(dataset, spec);
  return {dataset.subset(idx.train), dataset.subset(idx.val), dataset.subset(idx.test)};
}

Dataset make_toy(const ToySpec& spec) {
  if (spec.majority_count <= 0 || spec.minority_count <= 0 || spec.minority_clusters <= 0 ||
      !(spec.spread > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "toy dataset counts and spread must be positive");
  }
  if (spec.minority_clusters > spec.minority_count) {
    throw Error(ErrorCode::InvalidConfig, "minority_clusters exceeds minority_count");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> majority(0.0, spec.spread);
  std::normal_distribution<double> minority(0.0, 0.3 * spec.spread);

  std::vector<LabeledSample> samples;
  samples.reserve(static_cast<std::size_t>(spec.majority_count + spec.minority_count));
  for (int i = 0; i < spec.majority_count; ++i) {
    double x = majority(rng);
    double y = majority(rng);
    samples.push_back({{x, y}, 0});
  }
  const double radius = 3.0 * spec.spread;
  const int clusters = spec.minority_clusters;
  for (int c = 0; c < clusters; ++c) {
    const int in_cluster = spec.minority_count / clusters + (c < spec.minority_count % clusters ? 1 : 0);
    const double angle = 2.0 * std::numbers::pi * c / clusters + std::numbers::pi / 6.0;
    const double cx = radius * std::cos(angle);
    const double cy = radius * std::sin(angle);
    for (int i = 0; i < in_cluster; ++i) {
      double x = cx + minority(rng);
      double y = cy + minority(rng);
      samples.push_back({{x, y}, 1});
    }
  }
  return Dataset(std::move(samples), 2);
}

}  // namespace mixann
