#include "lumensep/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lumensep {

namespace {

constexpr char kMagic[5] = {'L', 'V', 'O', 'L', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find(',', pos), s.size());
    int v = 0;
    const char* first = s.data() + pos;
    const char* last = s.data() + end;
    while (first < last && *first == ' ') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
      throw PreconditionError(std::string("cannot parse ") + what + " from '" + s + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

int parse_int(const std::string& s, const char* what) {
  const auto v = parse_ints(s, what);
  if (v.size() != 1) throw PreconditionError(std::string("expected one integer for ") + what);
  return v[0];
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const void* data, std::size_t n) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

template <typename T>
const T& expect_kind(const AnyVolume& v, const std::filesystem::path& path, const char* kind) {
  if (const T* p = std::get_if<T>(&v)) return *p;
  throw PreconditionError("'" + path.string() + "' does not hold a " + kind + " volume");
}

const Dims& dims_of(const AnyVolume& v) {
  return std::visit([](const auto& x) -> const Dims& { return x.dims(); }, v);
}

AnyVolume decode_payload(std::span<const std::uint8_t> p, const Dims& d, VoxelKind kind,
                         const Spacing& spacing) {
  switch (kind) {
    case VoxelKind::Mask:
      return BinaryVolume::from_bytes(d, p, spacing);
    case VoxelKind::Gray: {
      GrayVolume g(d, 0, spacing);
      for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8)));
      }
      return g;
    }
    case VoxelKind::Label: {
      LabelVolume l(d, 0, spacing);
      for (std::size_t i = 0; i < l.size(); ++i) l[i] = get_u32(p, 4 * i);
      return l;
    }
  }
  throw UnknownKindError("unknown voxel kind");
}

}  // namespace

VoxelKind kind_of(const AnyVolume& v) {
  return static_cast<VoxelKind>(v.index());
}

std::size_t voxel_bytes(VoxelKind k) {
  switch (k) {
    case VoxelKind::Mask:
      return 1;
    case VoxelKind::Gray:
      return 2;
    case VoxelKind::Label:
      return 4;
  }
  throw UnknownKindError("unknown voxel kind " + std::to_string(static_cast<int>(k)));
}

VoxelKind parse_voxel_kind(const std::string& s) {
  if (s == "mask") return VoxelKind::Mask;
  if (s == "gray") return VoxelKind::Gray;
  if (s == "label") return VoxelKind::Label;
  throw PreconditionError("voxel kind must be mask, gray or label, got '" + s + "'");
}

std::vector<std::uint8_t> encode_volume(const AnyVolume& v) {
  const Dims& d = dims_of(v);
  const VoxelKind kind = kind_of(v);
  const Spacing sp = std::visit([](const auto& x) { return x.spacing(); }, v);
  std::vector<std::uint8_t> out;
  out.reserve(kVolumeHeaderBytes + d.count() * voxel_bytes(kind));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<std::uint8_t>(kind));
  put_u32(out, static_cast<std::uint32_t>(d.nx));
  put_u32(out, static_cast<std::uint32_t>(d.ny));
  put_u32(out, static_cast<std::uint32_t>(d.nz));
  for (const float s : sp) put_u32(out, std::bit_cast<std::uint32_t>(s));

  if (const auto* m = std::get_if<BinaryVolume>(&v)) {
    const auto bytes = m->to_bytes();
    out.insert(out.end(), bytes.begin(), bytes.end());
  } else if (const auto* g = std::get_if<GrayVolume>(&v)) {
    for (const auto x : g->data()) {
      const auto u = static_cast<std::uint16_t>(x);
      out.push_back(static_cast<std::uint8_t>(u & 0xff));
      out.push_back(static_cast<std::uint8_t>(u >> 8));
    }
  } else {
    for (const auto x : std::get<LabelVolume>(v).data()) put_u32(out, x);
  }
  return out;
}

AnyVolume decode_volume(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw BadMagicError("not a volume file (magic LVOL1 missing)");
  }
  if (bytes.size() < kVolumeHeaderBytes) {
    throw TruncatedError("truncated header: expected " + std::to_string(kVolumeHeaderBytes) +
                         " bytes, got " + std::to_string(bytes.size()));
  }
  const std::uint8_t code = bytes[5];
  if (code > 2) throw UnknownKindError("unknown voxel kind code " + std::to_string(code));
  const auto kind = static_cast<VoxelKind>(code);

  const std::uint32_t nx = get_u32(bytes, 6), ny = get_u32(bytes, 10), nz = get_u32(bytes, 14);
  if (nx == 0 || ny == 0 || nz == 0 || nx > 0x7fffffffu || ny > 0x7fffffffu || nz > 0x7fffffffu) {
    throw PreconditionError("invalid dimensions in volume header");
  }
  const Dims d{static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz)};
  validate_dims(d);
  Spacing sp{};
  for (int i = 0; i < 3; ++i) sp[i] = std::bit_cast<float>(get_u32(bytes, 18 + 4 * i));

  const std::size_t expected = kVolumeHeaderBytes + d.count() * voxel_bytes(kind);
  if (bytes.size() < expected) {
    throw TruncatedError("truncated volume: expected " + std::to_string(expected) +
                         " bytes, got " + std::to_string(bytes.size()));
  }
  return decode_payload(bytes.subspan(kVolumeHeaderBytes, expected - kVolumeHeaderBytes), d, kind,
                        sp);
}

void write_volume(const std::filesystem::path& path, const AnyVolume& v) {
  const auto bytes = encode_volume(v);
  write_file(path, bytes.data(), bytes.size());
}

AnyVolume read_volume(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_volume(bytes);
  } catch (const IoError& e) {
    // Re-raise with the path, keeping the concrete type.
    const std::string msg = path.string() + ": " + e.what();
    if (dynamic_cast<const BadMagicError*>(&e)) throw BadMagicError(msg);
    if (dynamic_cast<const TruncatedError*>(&e)) throw TruncatedError(msg);
    if (dynamic_cast<const UnknownKindError*>(&e)) throw UnknownKindError(msg);
    throw IoError(msg);
  }
}

BinaryVolume read_mask(const std::filesystem::path& path) {
  return expect_kind<BinaryVolume>(read_volume(path), path, "mask");
}

GrayVolume read_gray(const std::filesystem::path& path) {
  return expect_kind<GrayVolume>(read_volume(path), path, "gray");
}

LabelVolume read_labels(const std::filesystem::path& path) {
  return expect_kind<LabelVolume>(read_volume(path), path, "label");
}

AnyVolume import_raw(const std::filesystem::path& path, const Dims& dims, VoxelKind kind,
                     const Spacing& spacing) {
  validate_dims(dims);
  const auto bytes = read_file(path);
  const std::size_t expected = dims.count() * voxel_bytes(kind);
  if (bytes.size() != expected) {
    throw TruncatedError(path.string() + ": raw size mismatch: expected " +
                         std::to_string(expected) + " bytes, got " + std::to_string(bytes.size()));
  }
  return decode_payload(bytes, dims, kind, spacing);
}

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw PreconditionError("axis must be x, y or z, got '" + s + "'");
}

SliceImage render_slice(const AnyVolume& v, Axis axis, int index,
                        std::optional<IntensityWindow> window) {
  const Dims& d = dims_of(v);
  SliceImage img;
  img.axis = axis;
  img.index = index;
  int extent = 0;
  switch (axis) {
    case Axis::X:
      extent = d.nx;
      img.width = d.ny;
      img.height = d.nz;
      break;
    case Axis::Y:
      extent = d.ny;
      img.width = d.nx;
      img.height = d.nz;
      break;
    case Axis::Z:
      extent = d.nz;
      img.width = d.nx;
      img.height = d.ny;
      break;
  }
  if (index < 0 || index >= extent) {
    throw PreconditionError("slice index " + std::to_string(index) + " outside [0," +
                            std::to_string(extent) + ")");
  }
  auto voxel = [&](int col, int row) -> std::size_t {
    switch (axis) {
      case Axis::X:
        return d.index({index, col, row});
      case Axis::Y:
        return d.index({col, index, row});
      case Axis::Z:
        break;
    }
    return d.index({col, row, index});
  };

  IntensityWindow win{};
  if (const auto* g = std::get_if<GrayVolume>(&v)) {
    if (window) {
      win = *window;
    } else {
      const auto [lo, hi] = std::minmax_element(g->data().begin(), g->data().end());
      win = {*lo, *hi};
    }
    if (win.low > win.high) throw PreconditionError("window low exceeds high");
  }

  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  std::size_t o = 0;
  for (int row = 0; row < img.height; ++row) {
    for (int col = 0; col < img.width; ++col, ++o) {
      const std::size_t i = voxel(col, row);
      std::uint8_t px = 0;
      if (const auto* m = std::get_if<BinaryVolume>(&v)) {
        px = m->test(i) ? 255 : 0;
      } else if (const auto* l = std::get_if<LabelVolume>(&v)) {
        static constexpr std::uint8_t kPalette[5] = {0, 60, 120, 180, 255};
        const std::uint32_t lab = (*l)[i];
        px = lab < 5 ? kPalette[lab] : 255;
      } else {
        const long long val = std::get<GrayVolume>(v)[i];
        if (val <= win.low) {
          px = 0;
        } else if (val >= win.high) {
          px = 255;
        } else {
          px = static_cast<std::uint8_t>((val - win.low) * 255 / (win.high - win.low));
        }
      }
      img.pixels[o] = px;
    }
  }
  return img;
}

std::string encode_pgm(const SliceImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

void export_slice(const AnyVolume& v, Axis axis, int index, std::optional<IntensityWindow> window,
                  const std::filesystem::path& path) {
  const std::string pgm = encode_pgm(render_slice(v, axis, index, window));
  write_file(path, pgm.data(), pgm.size());
}

std::string format_points(const AnyVolume& v, std::optional<std::uint32_t> label) {
  const Dims& d = dims_of(v);
  std::string out;
  auto emit = [&](std::size_t i, std::uint32_t lab) {
    const Coord c = d.coord(i);
    out += std::to_string(c.x);
    out += ' ';
    out += std::to_string(c.y);
    out += ' ';
    out += std::to_string(c.z);
    out += ' ';
    out += std::to_string(lab);
    out += '\n';
  };
  if (const auto* m = std::get_if<BinaryVolume>(&v)) {
    if (label && *label != 1) return out;
    m->for_each([&](std::size_t i) { emit(i, 1); });
  } else if (const auto* l = std::get_if<LabelVolume>(&v)) {
    for (std::size_t i = 0; i < l->size(); ++i) {
      const std::uint32_t lab = (*l)[i];
      if (lab == 0 || (label && lab != *label)) continue;
      emit(i, lab);
    }
  } else {
    throw PreconditionError("point export needs a mask or label volume");
  }
  return out;
}

void export_points(const AnyVolume& v, std::optional<std::uint32_t> label,
                   const std::filesystem::path& path) {
  const std::string text = format_points(v, label);
  write_file(path, text.data(), text.size());
}

Coord parse_coord(const std::string& s) {
  const auto v = parse_ints(s, "coordinate");
  if (v.size() != 3) throw PreconditionError("coordinate must be x,y,z: '" + s + "'");
  return {v[0], v[1], v[2]};
}

PipelineConfig parse_pipeline_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "close_n") {
      cfg.close_iterations = parse_int(value, "close_n");
    } else if (key == "pair") {
      const auto pair = parse_connectivity_pair(value);
      cfg.closing.pair = pair;
      cfg.closing.metric = metric_for(pair.object());
    } else if (key == "max_hole_size") {
      const int s = parse_int(value, "max_hole_size");
      if (s < 0) throw PreconditionError("max_hole_size must be >= 0");
      cfg.closing.max_hole_size = static_cast<std::uint32_t>(s);
    } else if (key == "margin") {
      cfg.closing.margin = parse_int(value, "margin");
    } else if (key == "low") {
      cfg.grow_interval.low = parse_int(value, "low");
    } else if (key == "high") {
      cfg.grow_interval.high = parse_int(value, "high");
    } else if (key == "connectivity") {
      cfg.grow_connectivity = connectivity_from_int(parse_int(value, "connectivity"));
    } else if (key == "seed") {
      cfg.seeds.push_back(parse_coord(value));
    } else if (key == "crop") {
      const auto v = parse_ints(value, "crop");
      if (v.size() != 6) throw PreconditionError("crop must be x0,y0,z0,x1,y1,z1");
      cfg.crop = Box{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    } else if (key == "prefilter") {
      cfg.prefilter_iterations = parse_int(value, "prefilter");
    } else if (key == "bridge") {
      const auto comma = [&] {
        std::size_t pos = 0;
        for (int k = 0; k < 6 && pos != std::string::npos; ++k) pos = value.find(',', pos + 1);
        return pos;
      }();
      FlapBridge br;
      const auto v = parse_ints(value.substr(0, comma), "bridge");
      if (v.size() != 6) throw PreconditionError("bridge must be ax,ay,az,bx,by,bz[,metric]");
      br.a = {v[0], v[1], v[2]};
      br.b = {v[3], v[4], v[5]};
      if (comma != std::string::npos) br.metric = parse_metric(value.substr(comma + 1));
      cfg.bridges.push_back(br);
    } else {
      throw PreconditionError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
    }
  }
  return cfg;
}

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_pipeline_config(in);
}

std::string format_pipeline_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  auto coord = [](const Coord& c) {
    return std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z);
  };
  out << "close_n=" << cfg.close_iterations << "\n";
  out << "pair=" << to_string(cfg.closing.pair) << "\n";
  out << "max_hole_size=" << cfg.closing.max_hole_size << "\n";
  out << "margin=" << cfg.closing.margin << "\n";
  out << "low=" << cfg.grow_interval.low << "\n";
  out << "high=" << cfg.grow_interval.high << "\n";
  out << "connectivity=" << to_int(cfg.grow_connectivity) << "\n";
  for (const auto& s : cfg.seeds) out << "seed=" << coord(s) << "\n";
  if (cfg.crop) out << "crop=" << coord(cfg.crop->lo) << "," << coord(cfg.crop->hi) << "\n";
  if (cfg.prefilter_iterations > 0) out << "prefilter=" << cfg.prefilter_iterations << "\n";
  for (const auto& b : cfg.bridges) {
    out << "bridge=" << coord(b.a) << "," << coord(b.b) << "," << to_string(b.metric) << "\n";
  }
  return out.str();
}

}  // namespace lumensep
