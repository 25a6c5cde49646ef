#include "lumensep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "lumensep/holes_closing.hpp"
#include "lumensep/io.hpp"
#include "lumensep/labeling.hpp"
#include "lumensep/phantom.hpp"
#include "lumensep/pipeline.hpp"

namespace lumensep {

namespace {

namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(const std::string& key, const T& value) {
    out_ << key << '=' << value << '\n';
  }
  void time(const std::string& stage, double s) {
    std::ostringstream v;
    v.setf(std::ios::fixed);
    v.precision(6);
    v << s;
    put("time." + stage, v.str());
  }

 private:
  std::ostream& out_;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) parts.push_back(item);
  return parts;
}

Dims parse_dims(const std::string& s) {
  const Coord c = parse_coord(s);
  return {c.x, c.y, c.z};
}

Spacing parse_spacing(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() != 3) throw PreconditionError("spacing must be sx,sy,sz: '" + s + "'");
  Spacing sp{};
  for (int i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      sp[i] = std::stof(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[i].size() || !(sp[i] > 0.0f)) {
      throw PreconditionError("invalid spacing component '" + parts[i] + "'");
    }
  }
  return sp;
}

IntensityWindow parse_window(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() != 2) throw PreconditionError("window must be lo,hi: '" + s + "'");
  try {
    std::size_t u0 = 0, u1 = 0;
    const IntensityWindow w{std::stoi(parts[0], &u0), std::stoi(parts[1], &u1)};
    if (u0 == parts[0].size() && u1 == parts[1].size()) return w;
  } catch (const std::exception&) {
  }
  throw PreconditionError("invalid window '" + s + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory '" + dir.string() + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

struct PhantomArgs {
  std::string kind = "two_tubes_slot";
  int size = 96;
  std::string dims;
  int gap = 3;
  int aperture = 9;
  int thickness = 4;
  int wall = 4;
  std::string out;
};

int cmd_phantom(const PhantomArgs& a, Report& rep) {
  PhantomParams p;
  p.dims = a.dims.empty() ? Dims{a.size, a.size, a.size} : parse_dims(a.dims);
  p.gap = a.gap;
  p.aperture = a.aperture;
  p.thickness = a.thickness;
  p.wall = a.wall;
  const auto t0 = Clock::now();
  const Phantom ph = make_phantom(parse_phantom_kind(a.kind), p);
  const double t_make = seconds_since(t0);

  const fs::path dir(a.out);
  ensure_dir(dir);
  write_volume(dir / "gray.lvol", ph.gray);
  write_volume(dir / "truth_lumen1.lvol", ph.truth_lumen1);
  write_volume(dir / "truth_lumen2.lvol", ph.truth_lumen2);
  write_volume(dir / "truth_tear.lvol", ph.truth_tear);
  write_volume(dir / "truth_flap.lvol", ph.truth_flap);

  PipelineConfig cfg;
  cfg.close_iterations = ph.close_iterations;
  cfg.grow_interval = ph.interval;
  cfg.seeds = ph.seeds;
  write_text(dir / "config.txt", format_pipeline_config(cfg));
  if (ph.probes) {
    cfg.bridges.push_back({ph.probes->first, ph.probes->second, Metric::D6});
    write_text(dir / "config_bridged.txt", format_pipeline_config(cfg));
  }

  rep.put("kind", to_string(ph.kind));
  rep.put("dims", to_string(ph.gray.dims()));
  rep.put("voxels.truth_lumen1", ph.truth_lumen1.count());
  rep.put("voxels.truth_lumen2", ph.truth_lumen2.count());
  rep.put("voxels.truth_tear", ph.truth_tear.count());
  rep.put("voxels.truth_flap", ph.truth_flap.count());
  for (std::size_t i = 0; i < ph.seeds.size(); ++i) {
    rep.put("seed." + std::to_string(i + 1), to_string(ph.seeds[i]));
  }
  if (ph.probes) {
    rep.put("probe.a", to_string(ph.probes->first));
    rep.put("probe.b", to_string(ph.probes->second));
  }
  rep.put("interval", std::to_string(ph.interval.low) + "," + std::to_string(ph.interval.high));
  rep.put("close_n", ph.close_iterations);
  rep.time("phantom", t_make);
  return 0;
}

struct SegmentArgs {
  std::string in;
  std::vector<std::string> seeds;
  int low = 200;
  int high = 400;
  int connectivity = 26;
  std::string out;
};

int cmd_segment(const SegmentArgs& a, Report& rep) {
  const GrayVolume g = read_gray(a.in);
  std::vector<Coord> seeds;
  for (const auto& s : a.seeds) seeds.push_back(parse_coord(s));
  const Connectivity c = connectivity_from_int(a.connectivity);
  if (c == Connectivity::Eighteen) throw PreconditionError("connectivity must be 6 or 26");
  const auto t0 = Clock::now();
  const BinaryVolume mask = region_grow(g, seeds, {a.low, a.high}, c);
  const double dt = seconds_since(t0);
  write_volume(a.out, mask);
  rep.put("voxels.lumens", mask.count());
  rep.time("segment", dt);
  return 0;
}

struct FlapArgs {
  std::string lumens;
  int close_n = 2;
  std::string out;
};

int cmd_flap(const FlapArgs& a, Report& rep) {
  const BinaryVolume lumens = read_mask(a.lumens);
  const auto t0 = Clock::now();
  const BinaryVolume flap = extract_flap(lumens, a.close_n);
  const double dt = seconds_since(t0);
  write_volume(a.out, flap);
  rep.put("voxels.lumens", lumens.count());
  rep.put("voxels.flap", flap.count());
  rep.time("flap", dt);
  return 0;
}

struct CloseArgs {
  std::string in;
  std::string pair = "6,26";
  int max_hole_size = 0;
  int margin = 2;
  std::string out_filled;
  std::string out_surfaces;
};

int cmd_close(const CloseArgs& a, Report& rep) {
  if (a.max_hole_size < 0) throw PreconditionError("max-hole-size must be >= 0");
  if (a.out_filled.empty() && a.out_surfaces.empty()) {
    throw PreconditionError("close-holes needs --out-filled and/or --out-surfaces");
  }
  const BinaryVolume x = read_mask(a.in);
  const auto params = ClosingParams::for_pair(parse_connectivity_pair(a.pair),
                                              static_cast<std::uint32_t>(a.max_hole_size),
                                              a.margin);
  const auto t0 = Clock::now();
  const ClosingResult r = close_holes(x, params);
  const double dt = seconds_since(t0);
  if (!a.out_filled.empty()) write_volume(a.out_filled, r.filled);
  if (!a.out_surfaces.empty()) write_volume(a.out_surfaces, r.surfaces);
  rep.put("pair", to_string(params.pair));
  rep.put("metric", to_string(params.metric));
  rep.put("voxels.input", x.count());
  rep.put("voxels.filled", r.filled.count());
  rep.put("voxels.surfaces", r.surfaces.count());
  rep.put("components.surfaces", label_components(r.surfaces, params.pair.object()).count);
  rep.put("box_voxels", r.stats.box_voxels);
  rep.put("pushed", r.stats.pushed);
  rep.put("popped", r.stats.popped);
  rep.time("close-holes", dt);
  return 0;
}

struct SeparateArgs {
  std::string lumens;
  std::string tears;
  std::string out;
};

void report_separation(const Separation& s, Report& rep) {
  std::size_t n1 = 0, n2 = 0;
  for (const auto l : s.labels.data()) {
    n1 += l == kLumen1Label;
    n2 += l == kLumen2Label;
  }
  rep.put("components", s.component_count);
  rep.put("voxels.lumen1", n1);
  rep.put("voxels.lumen2", n2);
  rep.put("discarded_voxels", s.discarded_voxels);
}

int cmd_separate(const SeparateArgs& a, Report& rep) {
  const BinaryVolume lumens = read_mask(a.lumens);
  const BinaryVolume tears = read_mask(a.tears);
  if (lumens.dims() != tears.dims()) throw PreconditionError("lumens and tears dimensions differ");
  const auto t0 = Clock::now();
  const Separation s = separate_lumens(lumens, tears);
  const double dt = seconds_since(t0);
  write_volume(a.out, s.labels);
  report_separation(s, rep);
  rep.time("separate", dt);
  return 0;
}

struct CartographyArgs {
  std::string lumens;
  std::string flap;
  std::string tears;
  std::string out;
};

void report_cartography(const Cartography& c, Report& rep) {
  std::array<std::size_t, 5> n{};
  for (const auto l : c.data()) {
    if (l < n.size()) ++n[l];
  }
  rep.put("cartography.lumen1", n[kLumen1Label]);
  rep.put("cartography.lumen2", n[kLumen2Label]);
  rep.put("cartography.flap", n[kFlapLabel]);
  rep.put("cartography.tear", n[kTearLabel]);
}

int cmd_cartography(const CartographyArgs& a, Report& rep) {
  const LabelVolume lumens = read_labels(a.lumens);
  const BinaryVolume flap = read_mask(a.flap);
  const BinaryVolume tears = read_mask(a.tears);
  const auto t0 = Clock::now();
  const Cartography c = build_cartography(lumens, flap, tears);
  const double dt = seconds_since(t0);
  write_volume(a.out, c);
  report_cartography(c, rep);
  rep.time("cartography", dt);
  return 0;
}

struct RunArgs {
  std::string gray;
  std::string config;
  std::string out;
};

int cmd_run(const RunArgs& a, Report& rep) {
  const GrayVolume g = read_gray(a.gray);
  const PipelineConfig cfg = read_pipeline_config(a.config);
  const fs::path dir(a.out);
  ensure_dir(dir);
  const auto t0 = Clock::now();
  const PipelineResult r = run_pipeline(g, cfg);
  const double dt = seconds_since(t0);
  write_volume(dir / "cartography.lvol", r.cartography);
  write_volume(dir / "lumens.lvol", r.lumens);
  write_volume(dir / "flap.lvol", r.flap);
  write_volume(dir / "tears.lvol", r.tears);
  write_volume(dir / "lumen_labels.lvol", r.lumen_labels);

  rep.put("dims", to_string(g.dims()));
  rep.put("voxels.lumens", r.lumens.count());
  rep.put("voxels.flap", r.flap.count());
  rep.put("voxels.tears", r.tears.count());
  report_separation({r.lumen_labels, r.component_count, r.discarded_voxels}, rep);
  report_cartography(r.cartography, rep);
  for (const auto& t : r.timings) rep.time(t.stage, t.seconds);
  rep.time("total", dt);
  return 0;
}

struct ExpandArgs {
  std::string flap;
  std::string lumens;
  std::string a;
  std::string b;
  std::string metric = "d26";
  std::string out;
};

int cmd_expand(const ExpandArgs& a, Report& rep) {
  const BinaryVolume flap = read_mask(a.flap);
  const BinaryVolume lumens = read_mask(a.lumens);
  const Metric m = parse_metric(a.metric);
  const auto t0 = Clock::now();
  const BinaryVolume out = expand_flap(flap, lumens, parse_coord(a.a), parse_coord(a.b), m);
  const double dt = seconds_since(t0);
  write_volume(a.out, out);
  rep.put("voxels.flap", flap.count());
  rep.put("voxels.expanded", out.count());
  rep.put("voxels.added", out.count() - flap.count());
  rep.time("expand-flap", dt);
  return 0;
}

struct SliceArgs {
  std::string in;
  std::string axis = "z";
  int index = 0;
  std::string window;
  std::string out;
};

int cmd_slice(const SliceArgs& a, Report& rep) {
  const AnyVolume v = read_volume(a.in);
  std::optional<IntensityWindow> w;
  if (!a.window.empty()) w = parse_window(a.window);
  const auto t0 = Clock::now();
  const SliceImage img = render_slice(v, parse_axis(a.axis), a.index, w);
  const std::string pgm = encode_pgm(img);
  write_text(a.out, pgm);
  rep.put("width", img.width);
  rep.put("height", img.height);
  rep.put("bytes", pgm.size());
  rep.time("export-slice", seconds_since(t0));
  return 0;
}

struct PointsArgs {
  std::string in;
  std::optional<std::uint32_t> label;
  std::string out;
};

int cmd_points(const PointsArgs& a, Report& rep) {
  const AnyVolume v = read_volume(a.in);
  const auto t0 = Clock::now();
  const std::string text = format_points(v, a.label);
  write_text(a.out, text);
  rep.put("points", std::count(text.begin(), text.end(), '\n'));
  rep.time("export-points", seconds_since(t0));
  return 0;
}

struct ImportArgs {
  std::string in;
  std::string dims;
  std::string kind = "gray";
  std::string spacing = "1,1,1";
  std::string out;
};

int cmd_import(const ImportArgs& a, Report& rep) {
  const auto t0 = Clock::now();
  const AnyVolume v =
      import_raw(a.in, parse_dims(a.dims), parse_voxel_kind(a.kind), parse_spacing(a.spacing));
  write_volume(a.out, v);
  rep.put("kind", a.kind);
  rep.put("dims", a.dims);
  rep.time("import-raw", seconds_since(t0));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aortic lumen separation by holes closing", "lumensep"};
  app.require_subcommand(1);

  PhantomArgs ph;
  auto* c_ph = app.add_subcommand("phantom", "Generate an analytic test phantom");
  c_ph->add_option("--kind", ph.kind, "two_tubes_slot|thin_lumen_big_tear|edge_tear|torus")
      ->capture_default_str();
  c_ph->add_option("--size", ph.size, "Cubic volume edge")->capture_default_str();
  c_ph->add_option("--dims", ph.dims, "nx,ny,nz (overrides --size)");
  c_ph->add_option("--gap", ph.gap, "Flap width")->capture_default_str();
  c_ph->add_option("--aperture", ph.aperture, "Tear side (torus: tunnel radius)")
      ->capture_default_str();
  c_ph->add_option("--thickness", ph.thickness, "Thin lumen thickness")->capture_default_str();
  c_ph->add_option("--wall", ph.wall, "Torus wall and slab height")->capture_default_str();
  c_ph->add_option("--out", ph.out, "Output directory")->required();

  SegmentArgs sg;
  auto* c_sg = app.add_subcommand("segment", "Seeded region growing");
  c_sg->add_option("--in", sg.in, "Gray volume")->required();
  c_sg->add_option("--seed", sg.seeds, "x,y,z (repeatable)")->required();
  c_sg->add_option("--low", sg.low)->capture_default_str();
  c_sg->add_option("--high", sg.high)->capture_default_str();
  c_sg->add_option("--connectivity", sg.connectivity)->capture_default_str();
  c_sg->add_option("--out", sg.out, "Output mask")->required();

  FlapArgs fl;
  auto* c_fl = app.add_subcommand("flap", "Extract the intimal flap from connected lumens");
  c_fl->add_option("--lumens", fl.lumens)->required();
  c_fl->add_option("--close-n", fl.close_n)->capture_default_str();
  c_fl->add_option("--out", fl.out)->required();

  CloseArgs cl;
  auto* c_cl = app.add_subcommand("close-holes", "Close the holes of a binary object");
  c_cl->add_option("--in", cl.in)->required();
  c_cl->add_option("--pair", cl.pair, "6,26 or 26,6")->capture_default_str();
  c_cl->add_option("--max-hole-size", cl.max_hole_size, "0 closes every hole")
      ->capture_default_str();
  c_cl->add_option("--margin", cl.margin)->capture_default_str();
  c_cl->add_option("--out-filled", cl.out_filled);
  c_cl->add_option("--out-surfaces", cl.out_surfaces);

  SeparateArgs sp;
  auto* c_sp = app.add_subcommand("separate", "Split the lumens along the tear surfaces");
  c_sp->add_option("--lumens", sp.lumens)->required();
  c_sp->add_option("--tears", sp.tears)->required();
  c_sp->add_option("--out", sp.out)->required();

  CartographyArgs ca;
  auto* c_ca = app.add_subcommand("cartography", "Merge lumens, flap and tears into one label map");
  c_ca->add_option("--lumens", ca.lumens, "Lumen label volume")->required();
  c_ca->add_option("--flap", ca.flap)->required();
  c_ca->add_option("--tears", ca.tears)->required();
  c_ca->add_option("--out", ca.out)->required();

  RunArgs rn;
  auto* c_rn = app.add_subcommand("run", "Run the whole pipeline");
  c_rn->add_option("--gray", rn.gray)->required();
  c_rn->add_option("--config", rn.config)->required();
  c_rn->add_option("--out", rn.out, "Output directory")->required();

  ExpandArgs ex;
  auto* c_ex = app.add_subcommand("expand-flap", "Add a shortest path around an edge tear");
  c_ex->add_option("--flap", ex.flap)->required();
  c_ex->add_option("--lumens", ex.lumens)->required();
  c_ex->add_option("--a", ex.a, "x,y,z")->required();
  c_ex->add_option("--b", ex.b, "x,y,z")->required();
  c_ex->add_option("--metric", ex.metric, "d6, d18 or d26")->capture_default_str();
  c_ex->add_option("--out", ex.out)->required();

  SliceArgs sl;
  auto* c_sl = app.add_subcommand("export-slice", "Write one cross-section as a P5 graymap");
  c_sl->add_option("--in", sl.in)->required();
  c_sl->add_option("--axis", sl.axis)->capture_default_str();
  c_sl->add_option("--index", sl.index)->required();
  c_sl->add_option("--window", sl.window, "lo,hi for gray volumes");
  c_sl->add_option("--out", sl.out)->required();

  PointsArgs pt;
  auto* c_pt = app.add_subcommand("export-points", "List labelled voxels as x y z label");
  c_pt->add_option("--in", pt.in)->required();
  c_pt->add_option("--label", pt.label);
  c_pt->add_option("--out", pt.out)->required();

  ImportArgs im;
  auto* c_im = app.add_subcommand("import-raw", "Wrap a headerless raw dump");
  c_im->add_option("--in", im.in)->required();
  c_im->add_option("--dims", im.dims, "nx,ny,nz")->required();
  c_im->add_option("--kind", im.kind, "mask, gray or label")->capture_default_str();
  c_im->add_option("--spacing", im.spacing, "sx,sy,sz")->capture_default_str();
  c_im->add_option("--out", im.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Report rep(out);
  const std::vector<std::pair<CLI::App*, std::function<int()>>> commands = {
      {c_ph, [&] { return cmd_phantom(ph, rep); }},
      {c_sg, [&] { return cmd_segment(sg, rep); }},
      {c_fl, [&] { return cmd_flap(fl, rep); }},
      {c_cl, [&] { return cmd_close(cl, rep); }},
      {c_sp, [&] { return cmd_separate(sp, rep); }},
      {c_ca, [&] { return cmd_cartography(ca, rep); }},
      {c_rn, [&] { return cmd_run(rn, rep); }},
      {c_ex, [&] { return cmd_expand(ex, rep); }},
      {c_sl, [&] { return cmd_slice(sl, rep); }},
      {c_pt, [&] { return cmd_points(pt, rep); }},
      {c_im, [&] { return cmd_import(im, rep); }},
  };
  try {
    for (const auto& [sub, run] : commands) {
      if (sub->parsed()) {
        rep.put("command", sub->get_name());
        return run();
      }
    }
    return 2;
  } catch (const NotSeparatedError& e) {
    err << "error: " << e.what() << '\n';
    rep.put("status", "not_separated");
    return 3;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace lumensep
