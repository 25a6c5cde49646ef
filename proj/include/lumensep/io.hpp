#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lumensep/pipeline.hpp"
#include "lumensep/volume.hpp"

namespace lumensep {

// Volume file layout (all little-endian):
//   offset  0  "LVOL1"
//   offset  5  u8 voxel kind (0 mask, 1 i16 gray, 2 u32 label)
//   offset  6  u32 nx, ny, nz
//   offset 18  f32 sx, sy, sz (mm, metadata)
//   offset 30  payload, x-fastest; masks store one byte (0/1) per voxel
enum class VoxelKind : std::uint8_t { Mask = 0, Gray = 1, Label = 2 };

inline constexpr std::size_t kVolumeHeaderBytes = 30;

using AnyVolume = std::variant<BinaryVolume, GrayVolume, LabelVolume>;

VoxelKind kind_of(const AnyVolume& v);
std::size_t voxel_bytes(VoxelKind k);
VoxelKind parse_voxel_kind(const std::string& s);

std::vector<std::uint8_t> encode_volume(const AnyVolume& v);
/// Throws BadMagicError, UnknownKindError or TruncatedError.
AnyVolume decode_volume(std::span<const std::uint8_t> bytes);

void write_volume(const std::filesystem::path& path, const AnyVolume& v);
AnyVolume read_volume(const std::filesystem::path& path);

// Typed readers; a file of another kind raises PreconditionError.
BinaryVolume read_mask(const std::filesystem::path& path);
GrayVolume read_gray(const std::filesystem::path& path);
LabelVolume read_labels(const std::filesystem::path& path);

/// Headerless little-endian dump of the given kind and dims.
AnyVolume import_raw(const std::filesystem::path& path, const Dims& dims, VoxelKind kind,
                     const Spacing& spacing = kUnitSpacing);

enum class Axis { X, Y, Z };
Axis parse_axis(const std::string& s);

struct IntensityWindow {
  int low = 0;
  int high = 0;
};

/// 8-bit cross-section. Axis z: width nx, height ny (row = y). Axis y: width
/// nx, height nz (row = z). Axis x: width ny, height nz (row = z).
struct SliceImage {
  Axis axis = Axis::Z;
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Masks map to 0/255. Labels map 0,1,2,3,4 to 0,60,120,180,255 (higher labels
/// to 255). Gray values map linearly, floor((v - low) * 255 / (high - low)),
/// clamped to [0, 255]; the default window is the volume's min..max.
SliceImage render_slice(const AnyVolume& v, Axis axis, int index,
                        std::optional<IntensityWindow> window = std::nullopt);
/// Binary portable graymap: "P5\n<w> <h>\n255\n" then rows top to bottom.
std::string encode_pgm(const SliceImage& img);
void export_slice(const AnyVolume& v, Axis axis, int index, std::optional<IntensityWindow> window,
                  const std::filesystem::path& path);

/// "x y z label\n" per non-background voxel in storage order; mask voxels
/// carry label 1. With `label` set, only voxels of that label are listed.
std::string format_points(const AnyVolume& v, std::optional<std::uint32_t> label = std::nullopt);
void export_points(const AnyVolume& v, std::optional<std::uint32_t> label,
                   const std::filesystem::path& path);

/// Line-oriented key=value pipeline configuration. '#' starts a comment.
/// Keys: close_n, pair, max_hole_size, margin, low, high, connectivity,
/// seed=x,y,z (repeatable), crop=x0,y0,z0,x1,y1,z1, prefilter,
/// bridge=ax,ay,az,bx,by,bz[,metric] (repeatable).
PipelineConfig parse_pipeline_config(std::istream& in);
PipelineConfig read_pipeline_config(const std::filesystem::path& path);
std::string format_pipeline_config(const PipelineConfig& cfg);

/// "x,y,z"
Coord parse_coord(const std::string& s);

}  // namespace lumensep
