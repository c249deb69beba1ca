#ifndef FAIRPREP_BINNING_HPP
#define FAIRPREP_BINNING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairprep/dataset.hpp"

namespace fairprep {

/// Rank indices k_0 < k_1 < ... < k_B splitting a sorted multiset of
/// `group_size` values into B quantile bins: bin i covers sorted
/// positions (k_{i-1}, k_i]. The first `remainder` gaps have size
/// quotient+1, the rest size quotient.
struct BinIndexPlan {
  int bins = 0;
  std::size_t group_size = 0;
  std::vector<std::size_t> k;  // size bins + 1, k[0] = 0, k[bins] = group_size

  std::size_t quotient() const { return group_size / bins; }
  std::size_t remainder() const { return group_size % bins; }
};

/// Quantile bin boundaries of one attribute within one group:
/// boundaries[i-1] is the minimum of bin i for i in [1, B], and
/// boundaries[B] is the maximum of the last bin.
struct BinSpec {
  Group group = Group::U;
  std::string attribute;
  int bins = 0;
  std::vector<std::int64_t> boundaries;  // size bins + 1, non-decreasing

  std::int64_t lower(int bin) const { return boundaries[bin - 1]; }
  std::int64_t upper(int bin) const { return boundaries[bin]; }
};

/// Throws PlanError unless 1 <= bins <= group_size.
BinIndexPlan plan_indices(std::size_t group_size, int bins);

/// Sort `values` and read the boundaries off the index plan: the i-th
/// lower boundary is the (k_{i-1}+1)-th ranked element, the final
/// boundary the maximum. The single-party reference for the protocol.
BinSpec compute_boundaries_centralized(std::span<const std::int64_t> values,
                                       int bins, Group group = Group::U,
                                       std::string attribute = "");

/// Clamp x into [boundaries.front(), boundaries.back()] and return the
/// largest bin index i in [1, B] whose lower boundary is <= x.
int locate_bin(const BinSpec& spec, std::int64_t x);

}  // namespace fairprep

#endif  // FAIRPREP_BINNING_HPP
