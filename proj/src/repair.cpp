#include "fairprep/repair.hpp"

#include <algorithm>
#include <cmath>

#include "fairprep/errors.hpp"

namespace fairprep {

void RepairParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("repair: lambda must be in [0, 1]");
  if (spec_u.bins != spec_v.bins)
    throw ConfigError("repair: U and V specs have different bin counts");
  if (spec_u.attribute != spec_v.attribute)
    throw ConfigError("repair: U and V specs describe different attributes");
}

double repair_value(const RepairParams& params, std::int64_t x) {
  const BinSpec& v = params.spec_v;
  const BinSpec& u = params.spec_u;
  const std::int64_t clamped =
      std::clamp(x, v.boundaries.front(), v.boundaries.back());
  const int bin = locate_bin(v, clamped);

  const double v_lo = static_cast<double>(v.lower(bin));
  const double v_hi = static_cast<double>(v.upper(bin));
  const double fraction =
      v_hi == v_lo ? 0.5 : (static_cast<double>(clamped) - v_lo) / (v_hi - v_lo);

  const double u_lo = static_cast<double>(u.lower(bin));
  const double u_hi = static_cast<double>(u.upper(bin));
  const double target = u_lo + fraction * (u_hi - u_lo);
  return (1.0 - params.lambda) * static_cast<double>(x) +
         params.lambda * target;
}

Dataset repair_dataset(const std::vector<RepairParams>& params,
                       const Dataset& ds) {
  if (params.size() != ds.attribute_count())
    throw ConfigError("repair: " + std::to_string(params.size()) +
                      " parameter sets for " +
                      std::to_string(ds.attribute_count()) + " attributes");
  for (std::size_t j = 0; j < params.size(); ++j) {
    params[j].validate();
    if (!params[j].spec_v.attribute.empty() &&
        params[j].spec_v.attribute != ds.schema[j])
      throw ConfigError("repair: params for '" + params[j].spec_v.attribute +
                        "' aligned with column '" + ds.schema[j] + "'");
  }

  Dataset out = ds;
  for (auto& rec : out.records) {
    if (rec.group != Group::V) continue;
    for (std::size_t j = 0; j < rec.features.size(); ++j)
      rec.features[j] =
          repair_value(params[j], std::llround(rec.features[j]));
  }
  return out;
}

}  // namespace fairprep
