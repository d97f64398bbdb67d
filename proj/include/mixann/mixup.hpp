#pragma once

#include <span>
#include <vector>

#include "mixann/core_data.hpp"

namespace mixann {

struct SourcePair {
  LabeledSample x0;
  LabeledSample x1;
};

struct MixConfig {
  double eta = 0.3;  // label threshold

  void validate() const;
  /// True when eta lies outside [0.5, 1], the range the threshold is
  /// nominally defined on; such values are accepted but reported.
  bool eta_outside_nominal_range() const { return eta < 0.5 || eta > 1.0; }
};

/// alpha * x0 + (1 - alpha) * x1.
std::vector<double> mix_features(std::span<const double> x0, std::span<const double> x1, double alpha);

/// y0 when alpha >= eta (inclusive), else y1.
Label mix_label(Label y0, Label y1, double alpha, double eta);

/// `n` identical copies of the mixed sample.
std::vector<LabeledSample> synthesize(const SourcePair& pair, double alpha, int n, const MixConfig& cfg);

}  // namespace mixann
