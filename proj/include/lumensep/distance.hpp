#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lumensep/connectivity.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

/// Path-length metric induced by an adjacency: d6 is city-block, d26 is
/// chessboard.
enum class Metric { D6, D18, D26 };

Connectivity step_connectivity(Metric m);
/// The metric whose steps are c-adjacencies.
Metric metric_for(Connectivity c);
Metric parse_metric(const std::string& s);
std::string to_string(Metric m);

/// Integer step counts; kUnreached marks voxels with no path to the source.
using DistanceMap = Volume<std::uint32_t>;
inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Length of the shortest m-path from every voxel of `domain` to the nearest
/// voxel of x (multi-source breadth-first propagation). x must be non-empty.
DistanceMap distance_map(const Dims& domain, const BinaryVolume& x, Metric m);

/// Shortest m-path from a to b through voxels of `mask`, both endpoints
/// included. Among equal-length paths the one whose successive steps come
/// first in neighbor_offsets order is returned. Throws PreconditionError if an
/// endpoint lies outside the mask and DisconnectedError if b is unreachable.
std::vector<Coord> shortest_path(const BinaryVolume& mask, const Coord& a, const Coord& b,
                                 Metric m);

}  // namespace lumensep
