#include "lumensep/labeling.hpp"

#include <vector>

namespace lumensep {

Components label_components(const BinaryVolume& x, Connectivity c) {
  if (c == Connectivity::Eighteen) {
    throw PreconditionError("label_components: connectivity must be 6 or 26");
  }
  const Dims& d = x.dims();
  Components out{LabelVolume(d, 0, x.spacing()), 0};
  const auto offs = neighbor_offsets(c);
  std::vector<std::uint32_t> queue;

  x.for_each([&](std::size_t start) {
    if (out.labels[start] != 0) return;
    const std::uint32_t label = ++out.count;
    out.labels[start] = label;
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(start));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Coord p = d.coord(queue[head]);
      for (const auto& o : offs) {
        const Coord q{p.x + o.dx, p.y + o.dy, p.z + o.dz};
        if (!d.contains(q)) continue;
        const std::size_t qi = d.index(q);
        if (out.labels[qi] != 0 || !x.test(qi)) continue;
        out.labels[qi] = label;
        queue.push_back(static_cast<std::uint32_t>(qi));
      }
    }
  });
  return out;
}

std::vector<std::size_t> label_sizes(const LabelVolume& labels, std::uint32_t count) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count) + 1, 0);
  for (const auto l : labels.data()) {
    if (l > count) throw PreconditionError("label_sizes: label exceeds count");
    ++sizes[l];
  }
  return sizes;
}

}  // namespace lumensep
