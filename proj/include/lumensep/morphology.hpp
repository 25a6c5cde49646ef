#pragma once

#include <span>

#include "lumensep/connectivity.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

/// Unit ball of an adjacency: 7, 19 or 27 voxels including the center.
struct StructuringElement {
  Connectivity connectivity = Connectivity::Six;

  static StructuringElement ball(Connectivity c) { return {c}; }
};

/// Closed intensity interval [low, high].
struct IntensityInterval {
  int low = 0;
  int high = 0;

  bool contains(int v) const { return v >= low && v <= high; }
};

/// Iterated dilation by the unit ball, clipped to dims.
BinaryVolume dilate(const BinaryVolume& x, StructuringElement se, int iterations);

/// Iterated erosion. Positions outside dims count as background, so objects
/// touching the border erode there.
BinaryVolume erode(const BinaryVolume& x, StructuringElement se, int iterations);

/// erode(dilate(x, se, n), se, n)
BinaryVolume morphological_close(const BinaryVolume& x, StructuringElement se, int n);

/// dilate(erode(x, se, n), se, n)
BinaryVolume morphological_open(const BinaryVolume& x, StructuringElement se, int n);

/// Union over seeds of the c-connected component of {p : low <= g(p) <= high}
/// containing the seed. Throws PreconditionError naming the first seed that is
/// out of bounds or whose intensity falls outside the interval.
BinaryVolume region_grow(const GrayVolume& g, std::span<const Coord> seeds,
                         IntensityInterval interval,
                         Connectivity c = Connectivity::TwentySix);

}  // namespace lumensep
