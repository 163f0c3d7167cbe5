#pragma once

#include <vector>

#include "dlab/limit_map.hpp"
#include "dlab/recovery_map.hpp"

namespace dlab {

/// Parametric charts covering B(0,3) for the singular map: regions a, b, d,
/// e, f. Jets evaluate the given map.
std::vector<RegionChart> limit_atlas(const LimitMap& map);

/// Charts of the recovery atlas: tube, both caps, both shells, lower outer,
/// slab, outer cap. Jets evaluate the recovery map.
std::vector<RegionChart> recovery_atlas(const RecoveryMap& map);

/// Chart for one region by id (convenience lookup).
const RegionChart& chart_for(const std::vector<RegionChart>& atlas, RegionId id);

}  // namespace dlab
