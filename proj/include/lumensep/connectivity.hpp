#pragma once

#include <span>
#include <string>
#include <vector>

#include "lumensep/volume.hpp"

namespace lumensep {

/// Voxel adjacency: shared face (6), face or edge (18), face, edge or corner (26).
enum class Connectivity : int { Six = 6, Eighteen = 18, TwentySix = 26 };

/// Throws PreconditionError for anything but 6, 18 or 26.
Connectivity connectivity_from_int(int n);
inline int to_int(Connectivity c) { return static_cast<int>(c); }

/// Object/complement connectivities. Only the dual pairs (6,26) and (26,6)
/// are constructible.
class ConnectivityPair {
 public:
  ConnectivityPair(Connectivity object, Connectivity complement);

  Connectivity object() const { return object_; }
  Connectivity complement() const { return complement_; }

  friend bool operator==(const ConnectivityPair&, const ConnectivityPair&) = default;

 private:
  Connectivity object_;
  Connectivity complement_;
};

/// Parses "6,26" or "26,6".
ConnectivityPair parse_connectivity_pair(const std::string& s);
std::string to_string(const ConnectivityPair& p);

struct Offset {
  int dx;
  int dy;
  int dz;
};

/// Neighbor offsets of c, excluding the origin, sorted lexicographically by
/// (dz, dy, dx). Every neighborhood scan in the library uses this order.
std::span<const Offset> neighbor_offsets(Connectivity c);

/// True if a and b are distinct and c-adjacent.
bool adjacent(const Coord& a, const Coord& b, Connectivity c);

/// In-bounds c-neighbors of p in neighbor_offsets order.
std::vector<Coord> neighbors(const Coord& p, Connectivity c, const Dims& dims);

}  // namespace lumensep
