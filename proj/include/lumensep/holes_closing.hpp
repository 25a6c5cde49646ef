#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "lumensep/connectivity.hpp"
#include "lumensep/distance.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

/// Bucketed priority queue over voxel indices: one FIFO per integer distance,
/// popped farthest bucket first. Each voxel can be pushed once over the
/// lifetime of the list; later pushes of the same voxel are ignored.
/// Voxels pushed with kUnreached go to a trailing bucket served after every
/// finite one.
class HierarchicalList {
 public:
  HierarchicalList(std::size_t voxel_count, std::uint32_t max_distance);

  /// Returns false (and does nothing) if the voxel was pushed before.
  bool push(std::size_t voxel, std::uint32_t distance);
  std::optional<std::size_t> pop();

  bool empty() const { return live_ == 0; }
  bool seen(std::size_t voxel) const { return seen_[voxel] != 0; }
  /// Highest non-empty finite bucket, if any.
  std::optional<std::uint32_t> current() const;

  std::size_t pushed() const { return pushed_; }
  std::size_t popped() const { return popped_; }

 private:
  std::vector<std::deque<std::uint32_t>> buckets_;
  std::deque<std::uint32_t> unreached_;
  std::vector<std::uint8_t> seen_;
  std::int64_t current_ = -1;
  std::size_t live_ = 0;
  std::size_t pushed_ = 0;
  std::size_t popped_ = 0;
};

struct ClosingParams {
  ConnectivityPair pair{Connectivity::Six, Connectivity::TwentySix};
  /// Must be d6 for object connectivity 6 and d26 for 26.
  Metric metric = Metric::D6;
  /// Largest distance at which a separating point is kept; 0 keeps all of them.
  std::uint32_t max_hole_size = 0;
  /// Background padding around the object's bounding box (>= 1).
  int margin = 2;

  /// Parameters with the metric matching the pair's object connectivity.
  static ClosingParams for_pair(const ConnectivityPair& pair, std::uint32_t max_hole_size = 0,
                                int margin = 2);
  void validate() const;
};

struct ClosingStats {
  std::size_t box_voxels = 0;
  std::size_t pushed = 0;
  std::size_t popped = 0;
};

struct ClosingResult {
  /// Initial object plus the filling surfaces.
  BinaryVolume filled;
  /// filled \ initial object.
  BinaryVolume surfaces;
  ClosingStats stats;
};

/// Holes closing by carving. The object's bounding box, padded by
/// `params.margin`, starts fully filled; voxels are visited from the outer
/// shell inward in decreasing distance to the object (FIFO among equal
/// distances), propagating through face neighbors. A visited voxel
/// outside the object is carved away unless it separates the already-carved
/// region locally (topological number of the carved set, under the complement
/// connectivity, at least 2) and lies within `max_hole_size` of the object.
/// Retained voxels that stop separating are then pruned. With an unlimited
/// `max_hole_size` the carving repeats on its own output until nothing is
/// added, so the result is a fixed point. Stats sum over all passes.
ClosingResult close_holes(const BinaryVolume& x, const ClosingParams& params);

/// close_holes(x, params).surfaces
BinaryVolume surfaces_only(const BinaryVolume& x, const ClosingParams& params);

}  // namespace lumensep
