#ifndef FAIRPREP_METRICS_HPP
#define FAIRPREP_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fairprep/dataset.hpp"

namespace fairprep {

struct GroupConfusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

struct ConfusionByGroup {
  GroupConfusion u;
  GroupConfusion v;
};

/// Tally one confusion matrix per group from aligned vectors.
ConfusionByGroup confusion_by_group(std::span<const int> predictions,
                                    std::span<const int> labels,
                                    std::span<const Group> groups);

/// Proportion of correct predictions. Throws MetricError when empty or
/// misaligned.
double accuracy(std::span<const int> predictions, std::span<const int> labels);

/// FN / (FN + TP); throws MetricError when the group has no actual
/// positives.
double false_negative_rate(const GroupConfusion& c);

/// FP / (FP + TN); throws MetricError when the group has no actual
/// negatives.
double false_positive_rate(const GroupConfusion& c);

struct FairnessBreakdown {
  double dfnr = 0.0;        // |FNR_U - FNR_V|
  double dfpr = 0.0;        // |FPR_U - FPR_V|
  double unfairness = 0.0;  // dfnr + dfpr
};

/// Equalized-odds style unfairness: the summed absolute between-group
/// differences of false negative and false positive rates. Undefined
/// rates raise MetricError rather than silently reading as fair.
FairnessBreakdown unfairness(const ConfusionByGroup& confusion);

/// 1-D earth mover's distance between the empirical distributions of
/// two integer multisets with unit ground distance, divided by
/// range_size. Computed as the integral of |CDF_u - CDF_v|.
double normalized_emd(std::span<const std::int64_t> values_u,
                      std::span<const std::int64_t> values_v,
                      std::int64_t range_size);

struct MetricReport {
  double accuracy = 0.0;
  double dfnr = 0.0;
  double dfpr = 0.0;
  double unfairness = 0.0;
  std::vector<double> emd_per_attribute;
  double emd_mean = 0.0;
};

}  // namespace fairprep

#endif  // FAIRPREP_METRICS_HPP
