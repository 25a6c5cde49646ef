#include "lumensep/morphology.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace lumensep {

namespace {

using Bytes = std::vector<std::uint8_t>;

void require_iterations(int n, const char* op) {
  if (n < 1) {
    throw PreconditionError(std::string(op) + ": iteration count must be >= 1, got " +
                            std::to_string(n));
  }
}

// Calls f(dst_run, src_run, length) for every x-run where both p and p+o are in
// bounds, and oob(dst_run, length) for runs where p+o falls outside.
template <typename In, typename Out>
void for_offset_runs(const Dims& d, const Offset& o, In&& in_bounds, Out&& out_of_bounds) {
  const int x0 = std::max(0, -o.dx), x1 = std::min(d.nx, d.nx - o.dx);
  const auto sx = static_cast<std::ptrdiff_t>(d.nx);
  const auto sxy = sx * d.ny;
  const std::ptrdiff_t shift = o.dx + o.dy * sx + o.dz * sxy;
  for (int z = 0; z < d.nz; ++z) {
    const bool zok = z + o.dz >= 0 && z + o.dz < d.nz;
    for (int y = 0; y < d.ny; ++y) {
      const std::ptrdiff_t row = z * sxy + y * sx;
      const bool yok = y + o.dy >= 0 && y + o.dy < d.ny;
      if (!zok || !yok) {
        out_of_bounds(row, d.nx);
        continue;
      }
      if (x0 > 0) out_of_bounds(row, x0);
      if (x1 < d.nx) out_of_bounds(row + x1, d.nx - x1);
      if (x1 > x0) in_bounds(row + x0, row + x0 + shift, x1 - x0);
    }
  }
}

Bytes dilate_step(const Bytes& in, const Dims& d, Connectivity c) {
  Bytes out = in;
  for (const auto& o : neighbor_offsets(c)) {
    for_offset_runs(
        d, o,
        [&](std::ptrdiff_t dst, std::ptrdiff_t src, int n) {
          std::uint8_t* po = out.data() + dst;
          const std::uint8_t* pi = in.data() + src;
          for (int i = 0; i < n; ++i) po[i] |= pi[i];
        },
        [](std::ptrdiff_t, int) {});
  }
  return out;
}

Bytes erode_step(const Bytes& in, const Dims& d, Connectivity c) {
  Bytes out = in;
  for (const auto& o : neighbor_offsets(c)) {
    for_offset_runs(
        d, o,
        [&](std::ptrdiff_t dst, std::ptrdiff_t src, int n) {
          std::uint8_t* po = out.data() + dst;
          const std::uint8_t* pi = in.data() + src;
          for (int i = 0; i < n; ++i) po[i] &= pi[i];
        },
        [&](std::ptrdiff_t dst, int n) { std::fill_n(out.data() + dst, n, std::uint8_t{0}); });
  }
  return out;
}

}  // namespace

BinaryVolume dilate(const BinaryVolume& x, StructuringElement se, int iterations) {
  require_iterations(iterations, "dilate");
  Bytes buf = x.to_bytes();
  for (int i = 0; i < iterations; ++i) buf = dilate_step(buf, x.dims(), se.connectivity);
  return BinaryVolume::from_bytes(x.dims(), buf, x.spacing());
}

BinaryVolume erode(const BinaryVolume& x, StructuringElement se, int iterations) {
  require_iterations(iterations, "erode");
  Bytes buf = x.to_bytes();
  for (int i = 0; i < iterations; ++i) buf = erode_step(buf, x.dims(), se.connectivity);
  return BinaryVolume::from_bytes(x.dims(), buf, x.spacing());
}

BinaryVolume morphological_close(const BinaryVolume& x, StructuringElement se, int n) {
  require_iterations(n, "morphological_close");
  return erode(dilate(x, se, n), se, n);
}

BinaryVolume morphological_open(const BinaryVolume& x, StructuringElement se, int n) {
  require_iterations(n, "morphological_open");
  return dilate(erode(x, se, n), se, n);
}

BinaryVolume region_grow(const GrayVolume& g, std::span<const Coord> seeds,
                         IntensityInterval interval, Connectivity c) {
  if (interval.low > interval.high) {
    throw PreconditionError("region_grow: interval low " + std::to_string(interval.low) +
                            " exceeds high " + std::to_string(interval.high));
  }
  const Dims& d = g.dims();
  for (const auto& s : seeds) {
    if (!d.contains(s)) {
      throw PreconditionError("region_grow: seed " + to_string(s) + " outside volume " +
                              to_string(d));
    }
    const int v = g[d.index(s)];
    if (!interval.contains(v)) {
      throw PreconditionError("region_grow: seed " + to_string(s) + " has intensity " +
                              std::to_string(v) + " outside [" + std::to_string(interval.low) +
                              "," + std::to_string(interval.high) + "]");
    }
  }

  BinaryVolume out(d, g.spacing());
  std::vector<std::uint32_t> queue;
  for (const auto& s : seeds) {
    const std::size_t si = d.index(s);
    if (out.test(si)) continue;
    out.set(si);
    queue.push_back(static_cast<std::uint32_t>(si));
  }
  const auto offs = neighbor_offsets(c);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Coord p = d.coord(queue[head]);
    for (const auto& o : offs) {
      const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
      if (!d.contains(q)) continue;
      const std::size_t qi = d.index(q);
      if (out.test(qi) || !interval.contains(g[qi])) continue;
      out.set(qi);
      queue.push_back(static_cast<std::uint32_t>(qi));
    }
  }
  return out;
}

}  // namespace lumensep
