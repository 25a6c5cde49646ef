#include "lumensep/phantom.hpp"

#include <algorithm>

namespace lumensep {

namespace {

void fill_box(BinaryVolume& v, const Box& b) {
  for (int z = b.lo.z; z < b.hi.z; ++z) {
    for (int y = b.lo.y; y < b.hi.y; ++y) {
      for (int x = b.lo.x; x < b.hi.x; ++x) v.set(Coord{x, y, z});
    }
  }
}

void require(bool ok, const std::string& why) {
  if (!ok) throw PreconditionError("make_phantom: " + why);
}

void render(Phantom& ph, const PhantomParams& p) {
  const auto& in = p.intensities;
  ph.gray = GrayVolume(p.dims, static_cast<std::int16_t>(in.background));
  for (std::size_t i = 0; i < ph.gray.size(); ++i) {
    if (ph.truth_lumen1.test(i) || ph.truth_lumen2.test(i) || ph.truth_tear.test(i)) {
      ph.gray[i] = static_cast<std::int16_t>(in.blood);
    } else if (ph.truth_flap.test(i)) {
      ph.gray[i] = static_cast<std::int16_t>(in.wall);
    }
  }
  const int half = std::max(1, (in.blood - in.wall) / 2);
  ph.interval = {in.blood - half, in.blood + half};
}

Phantom make_lumens(PhantomKind kind, const PhantomParams& p) {
  const Dims& d = p.dims;
  const int g = p.gap;
  const int a = p.aperture;
  const int m = std::max(3, std::min(d.nx, d.ny) / 12);
  const int y0 = m, y1 = d.ny - m;

  require(g >= 1, "gap must be >= 1");
  require(a >= 1, "aperture must be >= 1");
  require(a < d.nz, "aperture must be shorter than the lumens (nz)");
  require(a <= y1 - y0 - 2, "aperture must fit inside the flap height (ny - 2*margin - 2)");

  int x0 = 0;  // first flap column
  int x2 = d.nx - m;
  if (kind == PhantomKind::ThinLumenBigTear) {
    require(p.thickness >= 1, "thickness must be >= 1");
    require(a > p.thickness, "aperture must exceed the thin lumen thickness");
    x0 = d.nx - m - p.thickness - g;
  } else {
    x0 = d.nx / 2 - g / 2;
  }
  require(x0 - m >= 4, "volume too small in x for the requested gap/thickness");
  require(x2 - (x0 + g) >= 1, "volume too small in x for the second lumen");

  Phantom ph{kind, {}, BinaryVolume(d), BinaryVolume(d), BinaryVolume(d), BinaryVolume(d), {}, {},
             g / 2 + 1, {}};
  fill_box(ph.truth_lumen1, {{m, y0, 0}, {x0, y1, d.nz}});
  fill_box(ph.truth_lumen2, {{x0 + g, y0, 0}, {x2, y1, d.nz}});

  const int zs = d.nz / 2 - a / 2;
  const int ys = kind == PhantomKind::EdgeTear ? y1 - a : d.ny / 2 - a / 2;
  const Box slot{{x0, ys, zs}, {x0 + g, ys + a, zs + a}};
  fill_box(ph.truth_tear, slot);
  fill_box(ph.truth_flap, {{x0, y0, 0}, {x0 + g, y1, d.nz}});
  ph.truth_flap = set_difference(ph.truth_flap, ph.truth_tear);

  const int yc = d.ny / 2;
  const int zq = d.nz / 4;
  ph.seeds = {{(m + x0) / 2, yc, zq}, {(x0 + g + x2) / 2, yc, zq}};
  if (kind == PhantomKind::EdgeTear) {
    // Two rows in from the flap's outer edge, just beyond each end of the slot.
    ph.probes = std::make_pair(Coord{x0, y1 - 2, zs - 1}, Coord{x0, y1 - 2, zs + a});
  }
  render(ph, p);
  return ph;
}

Phantom make_torus(const PhantomParams& p) {
  const Dims& d = p.dims;
  const int r = p.aperture;
  const int w = p.wall;
  require(r >= 1, "aperture must be >= 1");
  require(w >= 1, "wall must be >= 1");
  const int hole = 2 * r - 1;
  const int outer = hole + 2 * w;
  require(outer + 4 <= std::min(d.nx, d.ny), "frame does not fit in x/y with a 2-voxel border");
  require(w + 4 <= d.nz, "frame slab does not fit in z with a 2-voxel border");

  const int lo_x = (d.nx - outer) / 2, lo_y = (d.ny - outer) / 2, lo_z = (d.nz - w) / 2;
  Phantom ph{PhantomKind::Torus, {}, BinaryVolume(d), BinaryVolume(d), BinaryVolume(d),
             BinaryVolume(d), {}, {}, 1, {}};
  const Box tunnel{{lo_x + w, lo_y + w, lo_z}, {lo_x + w + hole, lo_y + w + hole, lo_z + w}};
  fill_box(ph.truth_lumen1, {{lo_x, lo_y, lo_z}, {lo_x + outer, lo_y + outer, lo_z + w}});
  fill_box(ph.truth_tear, tunnel);
  ph.truth_lumen1 = set_difference(ph.truth_lumen1, ph.truth_tear);
  ph.seeds = {{lo_x, lo_y, lo_z}};
  render(ph, p);
  return ph;
}

}  // namespace

PhantomKind parse_phantom_kind(const std::string& s) {
  if (s == "two_tubes_slot") return PhantomKind::TwoTubesSlot;
  if (s == "thin_lumen_big_tear") return PhantomKind::ThinLumenBigTear;
  if (s == "edge_tear") return PhantomKind::EdgeTear;
  if (s == "torus") return PhantomKind::Torus;
  throw PreconditionError("unknown phantom kind '" + s +
                          "' (expected two_tubes_slot, thin_lumen_big_tear, edge_tear or torus)");
}

std::string to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::TwoTubesSlot:
      return "two_tubes_slot";
    case PhantomKind::ThinLumenBigTear:
      return "thin_lumen_big_tear";
    case PhantomKind::EdgeTear:
      return "edge_tear";
    case PhantomKind::Torus:
      return "torus";
  }
  return "?";
}

Phantom make_phantom(PhantomKind kind, const PhantomParams& params) {
  validate_dims(params.dims);
  const auto& in = params.intensities;
  require(in.blood > in.wall && in.wall > in.background,
          "intensities must satisfy blood > wall > background");
  require(in.blood <= 32767 && in.background >= -32768, "intensities must fit 16 bits");
  return kind == PhantomKind::Torus ? make_torus(params) : make_lumens(kind, params);
}

}  // namespace lumensep
