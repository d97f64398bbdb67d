#include "mixann/mixup.hpp"

#include <string>

#include "mixann/error.hpp"

namespace mixann {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw Error(ErrorCode::AlphaOutOfRange, std::string(name) + " = " + std::to_string(v) + " outside [0,1]");
}

}  // namespace

void MixConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::InvalidConfig, "eta must lie in [0,1]");
}

std::vector<double> mix_features(std::span<const double> x0, std::span<const double> x1, double alpha) {
  if (x0.size() != x1.size()) throw Error(ErrorCode::DimensionMismatch, "mix-up sources differ in dimension");
  check_unit(alpha, "alpha");
  std::vector<double> out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = alpha * x0[i] + (1.0 - alpha) * x1[i];
  return out;
}

Label mix_label(Label y0, Label y1, double alpha, double eta) {
  check_unit(alpha, "alpha");
  check_unit(eta, "eta");
  return alpha >= eta ? y0 : y1;
}

std::vector<LabeledSample> synthesize(const SourcePair& pair, double alpha, int n, const MixConfig& cfg) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "oversampling count must be >= 1");
  LabeledSample s{mix_features(pair.x0.features, pair.x1.features, alpha),
                  mix_label(pair.x0.label, pair.x1.label, alpha, cfg.eta)};
  return std::vector<LabeledSample>(static_cast<std::size_t>(n), s);
}

}  // namespace mixann
