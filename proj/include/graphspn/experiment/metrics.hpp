#pragma once

#include <span>
#include <vector>

namespace graphspn::experiment {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// An item is flagged positive when its score is >= the threshold. The
// thresholds are +inf followed by every distinct score in decreasing order,
// so the curve runs from (0, 0) to (1, 1) and both rates are non-decreasing.
// Throws DataError unless both classes are present.
std::vector<RocPoint> roc_curve(std::span<const double> positive_scores, std::span<const double> negative_scores);

// Trapezoidal area under a curve from roc_curve.
double roc_auc(std::span<const RocPoint> curve);

}  // namespace graphspn::experiment
