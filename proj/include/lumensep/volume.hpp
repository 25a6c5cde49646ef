#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lumensep/error.hpp"

namespace lumensep {

/// Integer voxel position.
struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Strict ordering matching the storage order (z slowest, x fastest).
inline bool scan_less(const Coord& a, const Coord& b) {
  if (a.z != b.z) return a.z < b.z;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

std::string to_string(const Coord& c);

/// Voxel counts per axis. Storage is x-fastest, then y, then z.
struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  friend bool operator==(const Dims&, const Dims&) = default;

  std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool contains(const Coord& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < nx && c.y < ny && c.z < nz;
  }
  std::size_t index(const Coord& c) const {
    return (static_cast<std::size_t>(c.z) * static_cast<std::size_t>(ny) +
            static_cast<std::size_t>(c.y)) *
               static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(c.x);
  }
  Coord coord(std::size_t i) const {
    const auto sx = static_cast<std::size_t>(nx);
    const auto sxy = sx * static_cast<std::size_t>(ny);
    return {static_cast<int>(i % sx), static_cast<int>((i / sx) % static_cast<std::size_t>(ny)),
            static_cast<int>(i / sxy)};
  }
};

std::string to_string(const Dims& d);

/// Throws PreconditionError unless every axis is positive and the voxel
/// count fits 32-bit linear indices.
void validate_dims(const Dims& d);

/// Physical voxel size in mm. Metadata only; all algorithms work in voxel units.
using Spacing = std::array<float, 3>;
inline constexpr Spacing kUnitSpacing{1.0f, 1.0f, 1.0f};

/// Half-open axis-aligned box [lo, hi).
struct Box {
  Coord lo;
  Coord hi;

  friend bool operator==(const Box&, const Box&) = default;

  Dims dims() const { return {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z}; }
  bool contains(const Coord& c) const {
    return c.x >= lo.x && c.y >= lo.y && c.z >= lo.z && c.x < hi.x && c.y < hi.y && c.z < hi.z;
  }
};

/// Dense scalar field over a grid.
template <typename T>
class Volume {
 public:
  using value_type = T;

  Volume() = default;
  explicit Volume(const Dims& dims, T fill = T{}, const Spacing& spacing = kUnitSpacing)
      : dims_(dims), spacing_(spacing) {
    validate_dims(dims);
    data_.assign(dims.count(), fill);
  }

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  void set_spacing(const Spacing& s) { spacing_ = s; }
  std::size_t size() const { return data_.size(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(const Coord& c) { return data_[checked_index(c)]; }
  const T& at(const Coord& c) const { return data_[checked_index(c)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  std::size_t checked_index(const Coord& c) const {
    if (!dims_.contains(c)) {
      throw PreconditionError("coordinate " + to_string(c) + " outside volume " + to_string(dims_));
    }
    return dims_.index(c);
  }

  Dims dims_;
  Spacing spacing_ = kUnitSpacing;
  std::vector<T> data_;
};

/// Signed 16-bit intensities (Hounsfield-like).
using GrayVolume = Volume<std::int16_t>;
/// Non-negative labels, 0 is background.
using LabelVolume = Volume<std::uint32_t>;

/// Set of voxels stored one bit per voxel.
class BinaryVolume {
 public:
  BinaryVolume() = default;
  explicit BinaryVolume(const Dims& dims, const Spacing& spacing = kUnitSpacing);

  static BinaryVolume from_bytes(const Dims& dims, std::span<const std::uint8_t> bytes,
                                 const Spacing& spacing = kUnitSpacing);

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  void set_spacing(const Spacing& s) { spacing_ = s; }
  std::size_t size() const { return dims_.count(); }

  // Unchecked linear access.
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  // Checked coordinate access; throws PreconditionError outside dims.
  bool test(const Coord& c) const;
  void set(const Coord& c, bool v = true);

  /// Membership with out-of-bounds read as background.
  bool contains(const Coord& c) const { return dims_.contains(c) && test(dims_.index(c)); }

  std::size_t count() const;
  bool any() const;

  /// One byte (0/1) per voxel in storage order.
  std::vector<std::uint8_t> to_bytes() const;

  /// Calls f(index) for each member voxel in storage order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BinaryVolume& a, const BinaryVolume& b) {
    return a.dims_ == b.dims_ && a.words_ == b.words_;
  }

 private:
  friend BinaryVolume complement(const BinaryVolume&);

  void clear_tail();

  Dims dims_;
  Spacing spacing_ = kUnitSpacing;
  std::vector<std::uint64_t> words_;
};

BinaryVolume set_difference(const BinaryVolume& a, const BinaryVolume& b);
BinaryVolume set_union(const BinaryVolume& a, const BinaryVolume& b);
BinaryVolume set_intersection(const BinaryVolume& a, const BinaryVolume& b);
/// Complement within dims.
BinaryVolume complement(const BinaryVolume& a);

/// Tight bounding box of the member voxels; nullopt for an empty set.
std::optional<Box> bounding_box(const BinaryVolume& v);

/// Extract the sub-box `box` (must lie inside v's dims).
BinaryVolume crop(const BinaryVolume& v, const Box& box);
/// Re-embed: `part` placed with its origin at `origin` inside a volume of `dims`;
/// voxels falling outside are dropped.
BinaryVolume embed(const BinaryVolume& part, const Coord& origin, const Dims& dims);
/// Surround with `margin` background voxels on all six sides.
BinaryVolume pad(const BinaryVolume& v, int margin);

template <typename T>
Volume<T> crop(const Volume<T>& v, const Box& box) {
  if (!v.dims().contains(box.lo) || box.hi.x > v.dims().nx || box.hi.y > v.dims().ny ||
      box.hi.z > v.dims().nz || box.hi.x <= box.lo.x || box.hi.y <= box.lo.y ||
      box.hi.z <= box.lo.z) {
    throw PreconditionError("crop box outside volume " + to_string(v.dims()));
  }
  const Dims d = box.dims();
  Volume<T> out(d, T{}, v.spacing());
  std::size_t o = 0;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      const std::size_t src = v.dims().index({box.lo.x, box.lo.y + y, box.lo.z + z});
      for (int x = 0; x < d.nx; ++x) out[o++] = v[src + static_cast<std::size_t>(x)];
    }
  }
  return out;
}

template <typename T>
Volume<T> embed(const Volume<T>& part, const Coord& origin, const Dims& dims) {
  Volume<T> out(dims, T{}, part.spacing());
  const Dims& pd = part.dims();
  for (int z = 0; z < pd.nz; ++z) {
    for (int y = 0; y < pd.ny; ++y) {
      for (int x = 0; x < pd.nx; ++x) {
        const Coord c{origin.x + x, origin.y + y, origin.z + z};
        if (dims.contains(c)) out[dims.index(c)] = part[pd.index({x, y, z})];
      }
    }
  }
  return out;
}

/// Voxels whose label equals `label`.
BinaryVolume select_label(const LabelVolume& labels, std::uint32_t label);

/// 2|A∩B| / (|A|+|B|); 1 when both are empty.
double dice(const BinaryVolume& a, const BinaryVolume& b);

}  // namespace lumensep
