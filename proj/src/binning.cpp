#include "fairprep/binning.hpp"

#include <algorithm>

#include "fairprep/errors.hpp"

namespace fairprep {

BinIndexPlan plan_indices(std::size_t group_size, int bins) {
  if (bins < 1)
    throw PlanError("plan_indices: need at least 1 bin");
  if (static_cast<std::size_t>(bins) > group_size)
    throw PlanError("plan_indices: " + std::to_string(bins) +
                    " bins exceed group size " + std::to_string(group_size));
  BinIndexPlan plan;
  plan.bins = bins;
  plan.group_size = group_size;
  plan.k.resize(static_cast<std::size_t>(bins) + 1);
  plan.k[0] = 0;
  const std::size_t q = plan.quotient();
  const std::size_t r = plan.remainder();
  for (int i = 1; i <= bins; ++i) {
    const std::size_t gap = static_cast<std::size_t>(i) <= r ? q + 1 : q;
    plan.k[i] = plan.k[i - 1] + gap;
  }
  return plan;
}

BinSpec compute_boundaries_centralized(std::span<const std::int64_t> values,
                                       int bins, Group group,
                                       std::string attribute) {
  if (values.empty())
    throw PlanError("compute_boundaries: empty value multiset");
  const BinIndexPlan plan = plan_indices(values.size(), bins);

  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  BinSpec spec;
  spec.group = group;
  spec.attribute = std::move(attribute);
  spec.bins = bins;
  spec.boundaries.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 1; i <= bins; ++i)
    spec.boundaries[i - 1] = sorted[plan.k[i - 1]];  // rank k_{i-1}+1
  spec.boundaries[bins] = sorted.back();
  return spec;
}

int locate_bin(const BinSpec& spec, std::int64_t x) {
  const std::int64_t clamped =
      std::clamp(x, spec.boundaries.front(), spec.boundaries.back());
  // Largest i in [1, B] with boundaries[i-1] <= clamped; lower boundaries
  // occupy boundaries[0 .. B-1].
  const auto begin = spec.boundaries.begin();
  const auto end = begin + spec.bins;
  const auto it = std::upper_bound(begin, end, clamped);
  return static_cast<int>(it - begin);  // at least 1: boundaries[0] <= clamped
}

}  // namespace fairprep
