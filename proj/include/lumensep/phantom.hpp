#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lumensep/morphology.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

enum class PhantomKind {
  /// Two box lumens along z split by a flat flap of width `gap`, joined through
  /// an aperture x aperture slot in the middle of the flap.
  TwoTubesSlot,
  /// As TwoTubesSlot but the second lumen is only `thickness` voxels thick and
  /// the slot is taller than that.
  ThinLumenBigTear,
  /// As TwoTubesSlot with the slot cut into the flap's outer edge (y high side),
  /// so no closing of the lumens encircles it.
  EdgeTear,
  /// A square frame (wall `wall`, slab height `wall`) around one tunnel whose
  /// chessboard radius is `aperture` (side 2*aperture-1).
  Torus,
};

PhantomKind parse_phantom_kind(const std::string& s);
std::string to_string(PhantomKind k);

struct PhantomIntensities {
  int blood = 300;
  int wall = 80;
  int background = 0;
};

struct PhantomParams {
  Dims dims{96, 96, 96};
  int gap = 3;
  int aperture = 9;
  /// Thin lumen thickness (ThinLumenBigTear).
  int thickness = 4;
  /// Frame wall width and slab height (Torus).
  int wall = 4;
  PhantomIntensities intensities;
};

struct Phantom {
  PhantomKind kind;
  GrayVolume gray;
  BinaryVolume truth_lumen1;
  BinaryVolume truth_lumen2;
  BinaryVolume truth_tear;
  BinaryVolume truth_flap;
  /// One seed per lumen (one on the frame for Torus).
  std::vector<Coord> seeds;
  /// Flap voxels on both sides of an edge tear, for expand_flap.
  std::optional<std::pair<Coord, Coord>> probes;
  /// Closing depth that fills the flap gap.
  int close_iterations = 2;
  IntensityInterval interval;
};

/// Deterministic analytic phantom. Throws PreconditionError with an
/// explanation when the parameters do not fit the volume.
Phantom make_phantom(PhantomKind kind, const PhantomParams& params);

}  // namespace lumensep
