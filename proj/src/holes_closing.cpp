#include "lumensep/holes_closing.hpp"

#include <algorithm>

#include "lumensep/topology.hpp"

namespace lumensep {

HierarchicalList::HierarchicalList(std::size_t voxel_count, std::uint32_t max_distance)
    : buckets_(static_cast<std::size_t>(max_distance) + 1), seen_(voxel_count, 0) {
  if (max_distance == kUnreached) {
    throw PreconditionError("HierarchicalList: max distance must be finite");
  }
}

bool HierarchicalList::push(std::size_t voxel, std::uint32_t distance) {
  if (voxel >= seen_.size()) {
    throw PreconditionError("HierarchicalList: voxel index " + std::to_string(voxel) +
                            " out of range");
  }
  if (seen_[voxel] != 0) return false;
  if (distance == kUnreached) {
    unreached_.push_back(static_cast<std::uint32_t>(voxel));
  } else {
    if (distance >= buckets_.size()) {
      throw PreconditionError("HierarchicalList: distance " + std::to_string(distance) +
                              " above the list's maximum " +
                              std::to_string(buckets_.size() - 1));
    }
    buckets_[distance].push_back(static_cast<std::uint32_t>(voxel));
    current_ = std::max<std::int64_t>(current_, distance);
  }
  seen_[voxel] = 1;
  ++live_;
  ++pushed_;
  return true;
}

std::optional<std::size_t> HierarchicalList::pop() {
  while (current_ >= 0 && buckets_[static_cast<std::size_t>(current_)].empty()) --current_;
  std::deque<std::uint32_t>* bucket = nullptr;
  if (current_ >= 0) {
    bucket = &buckets_[static_cast<std::size_t>(current_)];
  } else if (!unreached_.empty()) {
    bucket = &unreached_;
  } else {
    return std::nullopt;
  }
  const std::size_t v = bucket->front();
  bucket->pop_front();
  --live_;
  ++popped_;
  return v;
}

std::optional<std::uint32_t> HierarchicalList::current() const {
  for (std::int64_t c = current_; c >= 0; --c) {
    if (!buckets_[static_cast<std::size_t>(c)].empty()) return static_cast<std::uint32_t>(c);
  }
  return std::nullopt;
}

ClosingParams ClosingParams::for_pair(const ConnectivityPair& pair, std::uint32_t max_hole_size,
                                      int margin) {
  return {pair, metric_for(pair.object()), max_hole_size, margin};
}

void ClosingParams::validate() const {
  if (metric != metric_for(pair.object())) {
    throw PreconditionError("closing metric " + to_string(metric) +
                            " does not match object connectivity " +
                            std::to_string(to_int(pair.object())));
  }
  if (margin < 1) throw PreconditionError("closing margin must be >= 1");
}

namespace {

// Carves around x. The pruning pass may also drop voxels of x that lie
// outside `original`.
ClosingResult close_once(const BinaryVolume& x, const BinaryVolume& original,
                         const ClosingParams& params) {
  const auto bb = bounding_box(x);
  if (!bb) throw PreconditionError("close_holes: object is empty");

  const int m = params.margin;
  const Coord origin{bb->lo.x - m, bb->lo.y - m, bb->lo.z - m};
  const Dims bbd = bb->dims();
  const Dims bd{bbd.nx + 2 * m, bbd.ny + 2 * m, bbd.nz + 2 * m};
  validate_dims(bd);

  const BinaryVolume object = embed(crop(x, *bb), {m, m, m}, bd);
  const BinaryVolume fixed = embed(crop(original, *bb), {m, m, m}, bd);
  const DistanceMap dist = distance_map(bd, object, params.metric);
  const std::uint32_t max_dist = *std::max_element(dist.data().begin(), dist.data().end());

  HierarchicalList list(bd.count(), max_dist);
  // Complement of the object being built, restricted to the box. Everything
  // outside the box is complement too.
  std::vector<std::uint8_t> carved(bd.count(), 0);

  for (int z = 0; z < bd.nz; ++z) {
    for (int y = 0; y < bd.ny; ++y) {
      const bool face = z == 0 || z == bd.nz - 1 || y == 0 || y == bd.ny - 1;
      for (int x0 = 0; x0 < bd.nx; ++x0) {
        if (face || x0 == 0 || x0 == bd.nx - 1) {
          const std::size_t i = bd.index({x0, y, z});
          list.push(i, dist[i]);
        }
      }
    }
  }

  // Propagate along faces: the voxel that pushed p is then a face neighbor, so a
  // carved pusher always shows up in p's complement neighborhood. Diagonal
  // pushes under (26,6) would carve voxels with T6 = 0 and seed isolated
  // complement pockets.
  const Connectivity separate = params.pair.complement();
  const auto offs = neighbor_offsets(Connectivity::Six);

  auto separates = [&](const Coord& p) {
    Neighborhood block = 0;
    int bit = 0;
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx, ++bit) {
          const Coord q{p.x + dx, p.y + dy, p.z + dz};
          if (!bd.contains(q) || carved[bd.index(q)] != 0) block |= 1u << bit;
        }
      }
    }
    return topological_number(block, separate) >= 2;
  };

  while (auto popped = list.pop()) {
    const std::size_t pi = *popped;
    const Coord p = bd.coord(pi);
    if (!object.test(pi)) {
      const bool keep = (params.max_hole_size == 0 || dist[pi] <= params.max_hole_size) &&
                        separates(p);
      if (!keep) carved[pi] = 1;
    }
    for (const auto& o : offs) {
      const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
      if (!bd.contains(q)) continue;
      const std::size_t qi = bd.index(q);
      list.push(qi, dist[qi]);
    }
  }

  // A retained voxel can stop separating once later neighbors are carved (the
  // remains of a membrane whose center exceeded max_hole_size). Prune those
  // until every surface voxel separates the final complement.
  std::deque<std::uint32_t> work;
  std::vector<std::uint8_t> queued(bd.count(), 0);
  for (std::size_t i = 0; i < carved.size(); ++i) {
    if (carved[i] == 0 && !fixed.test(i)) {
      work.push_back(static_cast<std::uint32_t>(i));
      queued[i] = 1;
    }
  }
  const auto around = neighbor_offsets(Connectivity::TwentySix);
  while (!work.empty()) {
    const std::size_t pi = work.front();
    work.pop_front();
    queued[pi] = 0;
    const Coord p = bd.coord(pi);
    if (separates(p)) continue;
    carved[pi] = 1;
    for (const auto& o : around) {
      const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
      if (!bd.contains(q)) continue;
      const std::size_t qi = bd.index(q);
      if (carved[qi] == 0 && queued[qi] == 0 && !fixed.test(qi)) {
        work.push_back(static_cast<std::uint32_t>(qi));
        queued[qi] = 1;
      }
    }
  }

  ClosingResult result{BinaryVolume(x.dims(), x.spacing()), BinaryVolume(x.dims(), x.spacing()),
                       {bd.count(), list.pushed(), list.popped()}};
  for (std::size_t i = 0; i < carved.size(); ++i) {
    if (carved[i] != 0) continue;
    const Coord b = bd.coord(i);
    const Coord c{origin.x + b.x, origin.y + b.y, origin.z + b.z};
    if (x.dims().contains(c)) result.filled.set(x.dims().index(c));
  }
  result.surfaces = set_difference(result.filled, original);
  return result;
}

}  // namespace

ClosingResult close_holes(const BinaryVolume& x, const ClosingParams& params) {
  params.validate();
  ClosingResult result = close_once(x, x, params);
  if (params.max_hole_size != 0 || !result.surfaces.any()) return result;
  const auto absorb = [&](const ClosingStats& st) {
    result.stats.box_voxels += st.box_voxels;
    result.stats.pushed += st.pushed;
    result.stats.popped += st.popped;
  };
  // Unlimited closing repeats on its own output until nothing is added, so
  // closing the result again finds no surfaces.
  for (;;) {
    const ClosingResult next = close_once(result.filled, result.filled, params);
    absorb(next.stats);
    if (!next.surfaces.any()) break;
    result.filled = set_union(result.filled, next.surfaces);
  }
  result.surfaces = set_difference(result.filled, x);
  // Drop surface voxels that no longer separate, unless that reopens a hole.
  const ClosingResult pruned = close_once(result.filled, x, params);
  absorb(pruned.stats);
  if (pruned.filled != result.filled) {
    const ClosingResult check = close_once(pruned.filled, pruned.filled, params);
    absorb(check.stats);
    if (!check.surfaces.any()) {
      result.filled = pruned.filled;
      result.surfaces = pruned.surfaces;
    }
  }
  return result;
}

BinaryVolume surfaces_only(const BinaryVolume& x, const ClosingParams& params) {
  return close_holes(x, params).surfaces;
}

}  // namespace lumensep
