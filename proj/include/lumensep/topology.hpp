#pragma once

#include <cstdint>

#include "lumensep/connectivity.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

/// Membership of the 3x3x3 block around a voxel packed into 27 bits. Bit
/// (dz+1)*9 + (dy+1)*3 + (dx+1) holds the voxel at offset (dx,dy,dz); bit 13
/// is the center.
using Neighborhood = std::uint32_t;

inline constexpr int neighborhood_bit(int dx, int dy, int dz) {
  return (dz + 1) * 9 + (dy + 1) * 3 + (dx + 1);
}
inline constexpr int kCenterBit = 13;

/// Block around p with out-of-volume voxels read as background.
Neighborhood neighborhood_of(const BinaryVolume& x, const Coord& p);

/// Topological number of the center voxel given its block. The center bit is
/// ignored.
///  - 26: number of 26-components of X in the 26-neighborhood.
///  - 6: number of 6-components of X in the 18-neighborhood (connectivity taken
///    inside the block) that contain one of the six face neighbors.
/// 18 is rejected.
int topological_number(Neighborhood block, Connectivity c);

int topological_number(const Coord& p, const BinaryVolume& x, Connectivity c);

}  // namespace lumensep
