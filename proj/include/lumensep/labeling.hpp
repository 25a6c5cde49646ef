#pragma once

#include <cstdint>
#include <vector>

#include "lumensep/connectivity.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

struct Components {
  LabelVolume labels;
  std::uint32_t count = 0;
};

/// Labels the c-connected components of x. Labels 1..count follow the order in
/// which each component is first met by a storage-order scan; background is 0.
/// c must be 6 or 26.
Components label_components(const BinaryVolume& x, Connectivity c);

/// Voxel count per label; index 0 counts background.
std::vector<std::size_t> label_sizes(const LabelVolume& labels, std::uint32_t count);

}  // namespace lumensep
