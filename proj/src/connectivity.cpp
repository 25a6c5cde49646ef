#include "lumensep/connectivity.hpp"

#include <array>
#include <cstdlib>

namespace lumensep {

namespace {

template <int MaxNorm1>
constexpr auto make_offsets() {
  // MaxNorm1: 1 -> 6-neighbors, 2 -> 18, 3 -> 26.
  constexpr int n = MaxNorm1 == 1 ? 6 : MaxNorm1 == 2 ? 18 : 26;
  std::array<Offset, n> out{};
  int k = 0;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int l1 = (dx != 0) + (dy != 0) + (dz != 0);
        if (l1 == 0 || l1 > MaxNorm1) continue;
        out[static_cast<std::size_t>(k++)] = Offset{dx, dy, dz};
      }
    }
  }
  return out;
}

constexpr auto kOffsets6 = make_offsets<1>();
constexpr auto kOffsets18 = make_offsets<2>();
constexpr auto kOffsets26 = make_offsets<3>();

}  // namespace

Connectivity connectivity_from_int(int n) {
  switch (n) {
    case 6:
      return Connectivity::Six;
    case 18:
      return Connectivity::Eighteen;
    case 26:
      return Connectivity::TwentySix;
    default:
      throw PreconditionError("connectivity must be 6, 18 or 26, got " + std::to_string(n));
  }
}

ConnectivityPair::ConnectivityPair(Connectivity object, Connectivity complement)
    : object_(object), complement_(complement) {
  const bool ok = (object == Connectivity::Six && complement == Connectivity::TwentySix) ||
                  (object == Connectivity::TwentySix && complement == Connectivity::Six);
  if (!ok) {
    throw PreconditionError("connectivity pair must be (6,26) or (26,6), got (" +
                            std::to_string(to_int(object)) + "," +
                            std::to_string(to_int(complement)) + ")");
  }
}

ConnectivityPair parse_connectivity_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw PreconditionError("connectivity pair must look like 6,26 or 26,6: '" + s + "'");
  }
  try {
    return ConnectivityPair(connectivity_from_int(std::stoi(s.substr(0, comma))),
                            connectivity_from_int(std::stoi(s.substr(comma + 1))));
  } catch (const std::logic_error&) {
    throw PreconditionError("connectivity pair must look like 6,26 or 26,6: '" + s + "'");
  }
}

std::string to_string(const ConnectivityPair& p) {
  return std::to_string(to_int(p.object())) + "," + std::to_string(to_int(p.complement()));
}

std::span<const Offset> neighbor_offsets(Connectivity c) {
  switch (c) {
    case Connectivity::Six:
      return kOffsets6;
    case Connectivity::Eighteen:
      return kOffsets18;
    case Connectivity::TwentySix:
      return kOffsets26;
  }
  throw PreconditionError("invalid connectivity");
}

bool adjacent(const Coord& a, const Coord& b, Connectivity c) {
  const int ax = std::abs(a.x - b.x);
  const int ay = std::abs(a.y - b.y);
  const int az = std::abs(a.z - b.z);
  if (ax > 1 || ay > 1 || az > 1) return false;
  const int l1 = ax + ay + az;
  if (l1 == 0) return false;
  switch (c) {
    case Connectivity::Six:
      return l1 == 1;
    case Connectivity::Eighteen:
      return l1 <= 2;
    case Connectivity::TwentySix:
      return true;
  }
  return false;
}

std::vector<Coord> neighbors(const Coord& p, Connectivity c, const Dims& dims) {
  if (!dims.contains(p)) {
    throw PreconditionError("neighbors: " + to_string(p) + " outside volume " + to_string(dims));
  }
  std::vector<Coord> out;
  const auto offs = neighbor_offsets(c);
  out.reserve(offs.size());
  for (const auto& o : offs) {
    const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
    if (dims.contains(q)) out.push_back(q);
  }
  return out;
}

}  // namespace lumensep
