#include "lumensep/topology.hpp"

#include <array>
#include <bit>

namespace lumensep {

namespace {

struct BlockTables {
  std::array<std::uint32_t, 27> adj6{};
  std::array<std::uint32_t, 27> adj26{};
  std::uint32_t n18 = 0;    // 18-neighborhood without center
  std::uint32_t n6 = 0;     // face neighbors
  std::uint32_t n26 = 0;    // all but center
};

BlockTables make_tables() {
  BlockTables t;
  for (int a = 0; a < 27; ++a) {
    const int ax = a % 3, ay = (a / 3) % 3, az = a / 9;
    const int l1 = (ax != 1) + (ay != 1) + (az != 1);
    if (a != kCenterBit) {
      t.n26 |= 1u << a;
      if (l1 <= 2) t.n18 |= 1u << a;
      if (l1 == 1) t.n6 |= 1u << a;
    }
    for (int b = 0; b < 27; ++b) {
      if (a == b) continue;
      const int bx = b % 3, by = (b / 3) % 3, bz = b / 9;
      const int dx = ax > bx ? ax - bx : bx - ax;
      const int dy = ay > by ? ay - by : by - ay;
      const int dz = az > bz ? az - bz : bz - az;
      if (dx > 1 || dy > 1 || dz > 1) continue;
      t.adj26[static_cast<std::size_t>(a)] |= 1u << b;
      if (dx + dy + dz == 1) t.adj6[static_cast<std::size_t>(a)] |= 1u << b;
    }
  }
  return t;
}

const BlockTables& tables() {
  static const BlockTables t = make_tables();
  return t;
}

// Grows `seed` to its connected component inside `set`.
std::uint32_t flood(std::uint32_t seed, std::uint32_t set, const std::array<std::uint32_t, 27>& adj) {
  std::uint32_t comp = seed;
  std::uint32_t frontier = seed;
  while (frontier != 0) {
    std::uint32_t grow = 0;
    while (frontier != 0) {
      grow |= adj[static_cast<std::size_t>(std::countr_zero(frontier))];
      frontier &= frontier - 1;
    }
    frontier = grow & set & ~comp;
    comp |= frontier;
  }
  return comp;
}

}  // namespace

Neighborhood neighborhood_of(const BinaryVolume& x, const Coord& p) {
  Neighborhood n = 0;
  const Dims& d = x.dims();
  const bool interior = p.x > 0 && p.y > 0 && p.z > 0 && p.x + 1 < d.nx && p.y + 1 < d.ny &&
                        p.z + 1 < d.nz;
  int bit = 0;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx, ++bit) {
        const Coord q{p.x + dx, p.y + dy, p.z + dz};
        const bool in = interior ? x.test(d.index(q)) : x.contains(q);
        if (in) n |= 1u << bit;
      }
    }
  }
  return n;
}

int topological_number(Neighborhood block, Connectivity c) {
  const BlockTables& t = tables();
  std::uint32_t set = 0;
  const std::array<std::uint32_t, 27>* adj = nullptr;
  switch (c) {
    case Connectivity::TwentySix:
      set = block & t.n26;
      adj = &t.adj26;
      break;
    case Connectivity::Six:
      set = block & t.n18;
      adj = &t.adj6;
      break;
    case Connectivity::Eighteen:
      throw PreconditionError("topological numbers are defined for 6 and 26 connectivity only");
  }
  int count = 0;
  if (c == Connectivity::TwentySix) {
    while (set != 0) {
      set &= ~flood(set & (~set + 1), set, *adj);
      ++count;
    }
  } else {
    // Only components touching a face neighbor count.
    std::uint32_t seeds = set & t.n6;
    while (seeds != 0) {
      const std::uint32_t comp = flood(seeds & (~seeds + 1), set, *adj);
      seeds &= ~comp;
      ++count;
    }
  }
  return count;
}

int topological_number(const Coord& p, const BinaryVolume& x, Connectivity c) {
  if (c == Connectivity::Eighteen) {
    throw PreconditionError("topological numbers are defined for 6 and 26 connectivity only");
  }
  if (!x.dims().contains(p)) {
    throw PreconditionError("topological_number: " + to_string(p) + " outside volume " +
                            to_string(x.dims()));
  }
  return topological_number(neighborhood_of(x, p), c);
}

}  // namespace lumensep
