#include "lumensep/volume.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace lumensep {

std::string to_string(const Coord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

std::string to_string(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

void validate_dims(const Dims& d) {
  if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0) {
    throw PreconditionError("volume dimensions must be positive, got " + to_string(d));
  }
  if (d.count() >= std::numeric_limits<std::uint32_t>::max()) {
    throw PreconditionError("volume " + to_string(d) + " exceeds 2^32-1 voxels");
  }
}

BinaryVolume::BinaryVolume(const Dims& dims, const Spacing& spacing)
    : dims_(dims), spacing_(spacing) {
  validate_dims(dims);
  words_.assign((dims.count() + 63) / 64, 0);
}

BinaryVolume BinaryVolume::from_bytes(const Dims& dims, std::span<const std::uint8_t> bytes,
                                      const Spacing& spacing) {
  BinaryVolume v(dims, spacing);
  if (bytes.size() != dims.count()) {
    throw PreconditionError("byte buffer size does not match " + to_string(dims));
  }
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] != 0) v.set(i);
  }
  return v;
}

bool BinaryVolume::test(const Coord& c) const {
  if (!dims_.contains(c)) {
    throw PreconditionError("coordinate " + to_string(c) + " outside volume " + to_string(dims_));
  }
  return test(dims_.index(c));
}

void BinaryVolume::set(const Coord& c, bool v) {
  if (!dims_.contains(c)) {
    throw PreconditionError("coordinate " + to_string(c) + " outside volume " + to_string(dims_));
  }
  set(dims_.index(c), v);
}

std::size_t BinaryVolume::count() const {
  std::size_t n = 0;
  for (const auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BinaryVolume::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::vector<std::uint8_t> BinaryVolume::to_bytes() const {
  std::vector<std::uint8_t> out(size(), 0);
  for_each([&](std::size_t i) { out[i] = 1; });
  return out;
}

void BinaryVolume::clear_tail() {
  const std::size_t rem = dims_.count() & 63;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

namespace {

void require_same_dims(const BinaryVolume& a, const BinaryVolume& b, const char* op) {
  if (a.dims() != b.dims()) {
    throw PreconditionError(std::string(op) + ": dimension mismatch " + to_string(a.dims()) +
                            " vs " + to_string(b.dims()));
  }
}

template <typename Op>
BinaryVolume combine(const BinaryVolume& a, const BinaryVolume& b, const char* name, Op op) {
  require_same_dims(a, b, name);
  BinaryVolume out(a.dims(), a.spacing());
  auto o = out.words();
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = op(wa[i], wb[i]);
  return out;
}

}  // namespace

BinaryVolume set_difference(const BinaryVolume& a, const BinaryVolume& b) {
  return combine(a, b, "set_difference", [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

BinaryVolume set_union(const BinaryVolume& a, const BinaryVolume& b) {
  return combine(a, b, "set_union", [](std::uint64_t x, std::uint64_t y) { return x | y; });
}

BinaryVolume set_intersection(const BinaryVolume& a, const BinaryVolume& b) {
  return combine(a, b, "set_intersection", [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

BinaryVolume complement(const BinaryVolume& a) {
  BinaryVolume out(a.dims(), a.spacing());
  for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] = ~a.words_[i];
  out.clear_tail();
  return out;
}

std::optional<Box> bounding_box(const BinaryVolume& v) {
  if (!v.any()) return std::nullopt;
  const Dims& d = v.dims();
  Box b{{d.nx, d.ny, d.nz}, {-1, -1, -1}};
  v.for_each([&](std::size_t i) {
    const Coord c = d.coord(i);
    b.lo = {std::min(b.lo.x, c.x), std::min(b.lo.y, c.y), std::min(b.lo.z, c.z)};
    b.hi = {std::max(b.hi.x, c.x), std::max(b.hi.y, c.y), std::max(b.hi.z, c.z)};
  });
  b.hi = {b.hi.x + 1, b.hi.y + 1, b.hi.z + 1};
  return b;
}

BinaryVolume crop(const BinaryVolume& v, const Box& box) {
  const Dims& vd = v.dims();
  if (!vd.contains(box.lo) || box.hi.x > vd.nx || box.hi.y > vd.ny || box.hi.z > vd.nz ||
      box.hi.x <= box.lo.x || box.hi.y <= box.lo.y || box.hi.z <= box.lo.z) {
    throw PreconditionError("crop box outside volume " + to_string(vd));
  }
  const Dims d = box.dims();
  BinaryVolume out(d, v.spacing());
  std::size_t o = 0;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      const std::size_t src = vd.index({box.lo.x, box.lo.y + y, box.lo.z + z});
      for (int x = 0; x < d.nx; ++x, ++o) {
        if (v.test(src + static_cast<std::size_t>(x))) out.set(o);
      }
    }
  }
  return out;
}

BinaryVolume embed(const BinaryVolume& part, const Coord& origin, const Dims& dims) {
  BinaryVolume out(dims, part.spacing());
  const Dims& pd = part.dims();
  part.for_each([&](std::size_t i) {
    const Coord p = pd.coord(i);
    const Coord c{origin.x + p.x, origin.y + p.y, origin.z + p.z};
    if (dims.contains(c)) out.set(dims.index(c));
  });
  return out;
}

BinaryVolume pad(const BinaryVolume& v, int margin) {
  if (margin < 0) throw PreconditionError("pad: negative margin");
  const Dims& d = v.dims();
  return embed(v, {margin, margin, margin},
               {d.nx + 2 * margin, d.ny + 2 * margin, d.nz + 2 * margin});
}

BinaryVolume select_label(const LabelVolume& labels, std::uint32_t label) {
  BinaryVolume out(labels.dims(), labels.spacing());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.set(i);
  }
  return out;
}

double dice(const BinaryVolume& a, const BinaryVolume& b) {
  const std::size_t na = a.count();
  const std::size_t nb = b.count();
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(set_intersection(a, b).count()) /
         static_cast<double>(na + nb);
}

}  // namespace lumensep
