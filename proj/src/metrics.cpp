#include "fairprep/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fairprep/errors.hpp"

namespace fairprep {

ConfusionByGroup confusion_by_group(std::span<const int> predictions,
                                    std::span<const int> labels,
                                    std::span<const Group> groups) {
  if (predictions.size() != labels.size() ||
      predictions.size() != groups.size())
    throw MetricError("confusion: misaligned inputs");
  ConfusionByGroup out;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    GroupConfusion& c = groups[i] == Group::U ? out.u : out.v;
    if (labels[i] == 1)
      (predictions[i] == 1 ? c.tp : c.fn) += 1;
    else
      (predictions[i] == 1 ? c.fp : c.tn) += 1;
  }
  return out;
}

double accuracy(std::span<const int> predictions,
                std::span<const int> labels) {
  if (predictions.empty() || predictions.size() != labels.size())
    throw MetricError("accuracy: empty or misaligned inputs");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == labels[i]) ++correct;
  return static_cast<double>(correct) /
         static_cast<double>(predictions.size());
}

double false_negative_rate(const GroupConfusion& c) {
  const std::int64_t actual_positive = c.fn + c.tp;
  if (actual_positive == 0)
    throw MetricError("rate: no actual positives in group");
  return static_cast<double>(c.fn) / static_cast<double>(actual_positive);
}

double false_positive_rate(const GroupConfusion& c) {
  const std::int64_t actual_negative = c.fp + c.tn;
  if (actual_negative == 0)
    throw MetricError("rate: no actual negatives in group");
  return static_cast<double>(c.fp) / static_cast<double>(actual_negative);
}

FairnessBreakdown unfairness(const ConfusionByGroup& confusion) {
  FairnessBreakdown out;
  out.dfnr = std::abs(false_negative_rate(confusion.u) -
                      false_negative_rate(confusion.v));
  out.dfpr = std::abs(false_positive_rate(confusion.u) -
                      false_positive_rate(confusion.v));
  out.unfairness = out.dfnr + out.dfpr;
  return out;
}

double normalized_emd(std::span<const std::int64_t> values_u,
                      std::span<const std::int64_t> values_v,
                      std::int64_t range_size) {
  if (values_u.empty() || values_v.empty())
    throw MetricError("emd: empty multiset");
  if (range_size < 1) throw MetricError("emd: range size must be >= 1");

  std::vector<std::int64_t> u(values_u.begin(), values_u.end());
  std::vector<std::int64_t> v(values_v.begin(), values_v.end());
  std::sort(u.begin(), u.end());
  std::sort(v.begin(), v.end());

  // Walk the merged support; between consecutive distinct values the two
  // CDFs are constant, so each segment contributes |F_u - F_v| * width.
  const double nu = static_cast<double>(u.size());
  const double nv = static_cast<double>(v.size());
  std::size_t iu = 0, iv = 0;
  double emd = 0.0;
  std::int64_t prev = 0;
  bool have_prev = false;
  while (iu < u.size() || iv < v.size()) {
    std::int64_t x;
    if (iu < u.size() && iv < v.size())
      x = std::min(u[iu], v[iv]);
    else
      x = iu < u.size() ? u[iu] : v[iv];
    if (have_prev) {
      const double cdf_u = static_cast<double>(iu) / nu;
      const double cdf_v = static_cast<double>(iv) / nv;
      emd += std::abs(cdf_u - cdf_v) * static_cast<double>(x - prev);
    }
    while (iu < u.size() && u[iu] == x) ++iu;
    while (iv < v.size() && v[iv] == x) ++iv;
    prev = x;
    have_prev = true;
  }
  return emd / static_cast<double>(range_size);
}

}  // namespace fairprep
