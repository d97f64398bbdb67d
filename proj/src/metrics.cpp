#include "mixann/metrics.hpp"

#include "mixann/error.hpp"

namespace mixann {

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorCode::LengthMismatch, "label lists differ in length");
  if (y_true.empty()) throw Error(ErrorCode::EmptyMatrix, "no labels to compare");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == 1;
    const bool predicted = y_pred[i] == 1;
    if (actual && predicted) ++cm.tp;
    else if (!actual && predicted) ++cm.fp;
    else if (!actual) ++cm.tn;
    else ++cm.fn;
  }
  return cm;
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

struct ClassScores {
  double precision;
  double recall;
  double f1;
};

ClassScores class_scores(double tp, double fp, double fn) {
  const double p = ratio(tp, tp + fp);
  const double r = ratio(tp, tp + fn);
  return {p, r, ratio(2.0 * p * r, p + r)};
}

}  // namespace

MacroScores macro_scores(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix is empty");
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto tn = static_cast<double>(cm.tn);
  const auto fn = static_cast<double>(cm.fn);
  const auto pos = class_scores(tp, fp, fn);
  // For class 0 the roles swap: tn are its hits, fn its false alarms.
  const auto neg = class_scores(tn, fn, fp);
  return {(pos.precision + neg.precision) / 2.0, (pos.recall + neg.recall) / 2.0, (pos.f1 + neg.f1) / 2.0};
}

}  // namespace mixann
