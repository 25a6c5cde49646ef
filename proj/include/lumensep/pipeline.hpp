#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lumensep/distance.hpp"
#include "lumensep/holes_closing.hpp"
#include "lumensep/morphology.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

/// Fixed label codes of a dissection cartography.
enum CartographyLabel : std::uint32_t {
  kBackgroundLabel = 0,
  kLumen1Label = 1,
  kLumen2Label = 2,
  kFlapLabel = 3,
  kTearLabel = 4,
};

/// Label volume holding CartographyLabel values only.
using Cartography = LabelVolume;

/// Flap extension between two manually chosen points (for tears lying on a
/// lumen edge, where the closing does not encircle the connection).
struct FlapBridge {
  Coord a;
  Coord b;
  Metric metric = Metric::D6;
};

struct PipelineConfig {
  /// Closing depth n for flap extraction.
  int close_iterations = 2;
  ClosingParams closing;
  IntensityInterval grow_interval{200, 400};
  Connectivity grow_connectivity = Connectivity::TwentySix;
  /// In full-volume coordinates, also when a crop is set.
  std::vector<Coord> seeds;
  std::optional<Box> crop;
  /// Optional opening (erode then dilate, 6-ball) of the grown lumens to drop
  /// small vessels; 0 disables it.
  int prefilter_iterations = 0;
  std::vector<FlapBridge> bridges;

  void validate(const Dims& volume) const;
};

/// morphological_close(lumens, se, n) \ lumens, computed on a copy padded by n
/// background voxels so the border does not erode the closing.
BinaryVolume extract_flap(const BinaryVolume& lumens, int n,
                          StructuringElement se = StructuringElement::ball(Connectivity::Six));

/// Filling surfaces of every tunnel of the flap (max_hole_size forced to 0).
BinaryVolume tear_surfaces(const BinaryVolume& flap, ClosingParams closing);

struct Separation {
  /// 0 background, 1 and 2 the two largest 26-components of lumens \ tears
  /// (ordered by first encounter in storage order).
  LabelVolume labels;
  /// Component count before dropping the smaller fragments.
  std::uint32_t component_count = 0;
  std::size_t discarded_voxels = 0;
};

/// Throws NotSeparatedError when fewer than two components remain.
Separation separate_lumens(const BinaryVolume& lumens, const BinaryVolume& tears);

/// flap ∪ shortest_path(complement(lumens), a, b, m).
BinaryVolume expand_flap(const BinaryVolume& flap, const BinaryVolume& lumens, const Coord& a,
                         const Coord& b, Metric m);

/// Per-voxel priority: tear (4) > flap (3) > lumen label (1, 2) > background.
Cartography build_cartography(const LabelVolume& lumen_labels, const BinaryVolume& flap,
                              const BinaryVolume& tears);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineResult {
  Cartography cartography;
  BinaryVolume lumens;      // connected lumens after region growing
  BinaryVolume flap;        // after optional bridges
  BinaryVolume tears;       // filling surfaces of the flap
  LabelVolume lumen_labels; // separated lumens
  std::uint32_t component_count = 0;
  std::size_t discarded_voxels = 0;
  std::vector<StageTiming> timings;
};

/// crop -> region_grow -> [prefilter] -> extract_flap -> [bridges] ->
/// tear_surfaces -> separate_lumens -> build_cartography. Outputs are in the
/// full volume frame. Stage failures are rethrown with the stage name
/// prefixed, keeping their error type.
PipelineResult run_pipeline(const GrayVolume& gray, const PipelineConfig& cfg);

}  // namespace lumensep
