#include "lumensep/distance.hpp"

namespace lumensep {

namespace {

// Breadth-first distances from `sources`, moving only through `passable`
// voxels (all voxels when passable is null).
DistanceMap propagate(const Dims& d, const BinaryVolume& sources, const BinaryVolume* passable,
                      Metric m) {
  DistanceMap dist(d, kUnreached, sources.spacing());
  std::vector<std::uint32_t> queue;
  queue.reserve(sources.count());
  sources.for_each([&](std::size_t i) {
    dist[i] = 0;
    queue.push_back(static_cast<std::uint32_t>(i));
  });
  const auto offs = neighbor_offsets(step_connectivity(m));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t pi = queue[head];
    const Coord p = d.coord(pi);
    const std::uint32_t next = dist[pi] + 1;
    for (const auto& o : offs) {
      const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
      if (!d.contains(q)) continue;
      const std::size_t qi = d.index(q);
      if (dist[qi] != kUnreached) continue;
      if (passable != nullptr && !passable->test(qi)) continue;
      dist[qi] = next;
      queue.push_back(static_cast<std::uint32_t>(qi));
    }
  }
  return dist;
}

}  // namespace

Connectivity step_connectivity(Metric m) {
  switch (m) {
    case Metric::D6:
      return Connectivity::Six;
    case Metric::D18:
      return Connectivity::Eighteen;
    case Metric::D26:
      return Connectivity::TwentySix;
  }
  throw PreconditionError("invalid metric");
}

Metric metric_for(Connectivity c) {
  switch (c) {
    case Connectivity::Six:
      return Metric::D6;
    case Connectivity::Eighteen:
      return Metric::D18;
    case Connectivity::TwentySix:
      return Metric::D26;
  }
  throw PreconditionError("invalid connectivity");
}

Metric parse_metric(const std::string& s) {
  if (s == "d6" || s == "6") return Metric::D6;
  if (s == "d18" || s == "18") return Metric::D18;
  if (s == "d26" || s == "26") return Metric::D26;
  throw PreconditionError("metric must be d6, d18 or d26, got '" + s + "'");
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::D6:
      return "d6";
    case Metric::D18:
      return "d18";
    case Metric::D26:
      return "d26";
  }
  return "?";
}

DistanceMap distance_map(const Dims& domain, const BinaryVolume& x, Metric m) {
  if (x.dims() != domain) {
    throw PreconditionError("distance_map: object dims " + to_string(x.dims()) +
                            " differ from domain " + to_string(domain));
  }
  if (!x.any()) throw PreconditionError("distance_map: source object is empty");
  return propagate(domain, x, nullptr, m);
}

std::vector<Coord> shortest_path(const BinaryVolume& mask, const Coord& a, const Coord& b,
                                 Metric m) {
  const Dims& d = mask.dims();
  for (const Coord* e : {&a, &b}) {
    if (!mask.contains(*e)) {
      throw PreconditionError("shortest_path: endpoint " + to_string(*e) + " is not in the mask");
    }
  }
  BinaryVolume source(d);
  source.set(b);
  const DistanceMap dist = propagate(d, source, &mask, m);
  if (dist.at(a) == kUnreached) {
    throw DisconnectedError("shortest_path: no path from " + to_string(a) + " to " +
                            to_string(b) + " inside the mask");
  }

  // Descend the distance field from a, taking the first neighbor in
  // enumeration order at each step.
  std::vector<Coord> path{a};
  Coord p = a;
  const auto offs = neighbor_offsets(step_connectivity(m));
  for (std::uint32_t k = dist.at(a); k > 0; --k) {
    for (const auto& o : offs) {
      const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
      if (d.contains(q) && dist[d.index(q)] == k - 1) {
        p = q;
        break;
      }
    }
    path.push_back(p);
  }
  return path;
}

}  // namespace lumensep
