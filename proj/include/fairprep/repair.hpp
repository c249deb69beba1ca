#ifndef FAIRPREP_REPAIR_HPP
#define FAIRPREP_REPAIR_HPP

#include <cstdint>
#include <vector>

#include "fairprep/binning.hpp"
#include "fairprep/dataset.hpp"

namespace fairprep {

/// Everything needed to repair one attribute: the two groups' bin
/// boundaries and the interpolation strength lambda in [0, 1].
struct RepairParams {
  double lambda = 0.0;
  BinSpec spec_u;
  BinSpec spec_v;
  int digits = 0;

  /// Throws ConfigError unless the two specs agree on bin count and
  /// attribute and lambda is in [0, 1].
  void validate() const;
};

/// Min-max map a privileged-group value toward the unprivileged bins:
/// locate x's bin among the V boundaries, take its fractional position
/// within that bin (1/2 when the bin has zero width), and interpolate
/// between x and the position's image in the matching U bin:
///
///   repaired = (1 - lambda) * x
///            + lambda * (mU_i + frac * (mU_{i+1} - mU_i))
///
/// Values outside the V training range are clamped before the bin and
/// fraction are computed, so a full repair always lands inside the U
/// range; at lambda = 0 the original x is returned unchanged.
double repair_value(const RepairParams& params, std::int64_t x);

/// Apply per-attribute repairs to every group-V record of `ds` (which
/// must be integerized); group-U records, labels and row order are
/// untouched. Throws ConfigError when `params` does not line up with
/// the dataset schema.
Dataset repair_dataset(const std::vector<RepairParams>& params,
                       const Dataset& ds);

}  // namespace fairprep

#endif  // FAIRPREP_REPAIR_HPP
