// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lumensep/cli.hpp"
#include "lumensep/distance.hpp"
#include "lumensep/holes_closing.hpp"
#include "lumensep/io.hpp"
#include "lumensep/labeling.hpp"
#include "lumensep/morphology.hpp"
#include "lumensep/phantom.hpp"
#include "lumensep/pipeline.hpp"
#include "lumensep/topology.hpp"
#include "oracles.hpp"

using namespace lumensep;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

struct CliRun {
  int code = 0;
  std::map<std::string, std::string> report;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lumensep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  std::istringstream lines(out.str());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) r.report[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return r;
}

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lumensep_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig config_for(const Phantom& ph) {
  PipelineConfig cfg;
  cfg.close_iterations = ph.close_iterations;
  cfg.grow_interval = ph.interval;
  cfg.seeds = ph.seeds;
  return cfg;
}

BinaryVolume restrict_to(const BinaryVolume& v, const Box& b) {
  BinaryVolume out(v.dims());
  for (int z = b.lo.z; z < b.hi.z; ++z)
    for (int y = b.lo.y; y < b.hi.y; ++y)
      for (int x = b.lo.x; x < b.hi.x; ++x) {
        const Coord c{x, y, z};
        if (v.dims().contains(c) && v.contains(c)) out.set(c);
      }
  return out;
}

bool labels_touch(const LabelVolume& labels, std::uint32_t a, std::uint32_t b) {
  const Dims& d = labels.dims();
  for (std::size_t i = 0; i < d.count(); ++i) {
    if (labels[i] != a) continue;
    const Coord p = d.coord(i);
    for (const Coord& o : oracle::block_offsets()) {
      const Coord q{p.x + o.x, p.y + o.y, p.z + o.z};
      if (d.contains(q) && labels[d.index(q)] == b) return true;
    }
  }
  return false;
}

std::size_t popcount_difference(const BinaryVolume& a, const BinaryVolume& b,
                                 const BinaryVolume& excluded) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.dims().count(); ++i)
    if (a.test(i) != b.test(i) && !excluded.test(i)) ++n;
  return n;
}

// Torus phantom, d26 with max_hole_size 4 and 0.
Outcome torus_closure() {
  Outcome o;
  const ConnectivityPair pair{Connectivity::TwentySix, Connectivity::Six};
  for (const int a : {4, 6}) {
    PhantomParams pp;
    pp.dims = {64, 64, 64};
    pp.aperture = a;
    const Phantom ph = make_phantom(PhantomKind::Torus, pp);
    const BinaryVolume& x = ph.truth_lumen1;
    const auto tunnel = bounding_box(ph.truth_tear);
    if (!tunnel) {
      o.expect(false, "torus has a tunnel");
      continue;
    }
    const Coord above{(tunnel->lo.x + tunnel->hi.x - 1) / 2, (tunnel->lo.y + tunnel->hi.y - 1) / 2,
                      tunnel->lo.z - 1};
    const Coord below{above.x, above.y, tunnel->hi.z};
    const Box region{{tunnel->lo.x, tunnel->lo.y, tunnel->lo.z - 1},
                     {tunnel->hi.x, tunnel->hi.y, tunnel->hi.z + 1}};
    o.expect(oracle::reachable(restrict_to(complement(x), region), above, below, 26),
             "probes connected through the open tunnel (a=" + std::to_string(a) + ")");

    for (const std::uint32_t s : {4u, 0u}) {
      const auto t0 = Clock::now();
      const ClosingResult r = close_holes(x, ClosingParams::for_pair(pair, s));
      const double t = seconds_since(t0);
      const std::string tag = "a=" + std::to_string(a) + " s=" + std::to_string(s);
      const bool expect_plug = s == 0 || a <= 4;
      o.expect(r.surfaces.any() == expect_plug,
               tag + (expect_plug ? " has surfaces" : " has no surfaces"));
      if (expect_plug) {
        o.expect(!oracle::reachable(restrict_to(complement(r.filled), region), above, below, 26),
                 tag + " probes disconnected");
      }
      o.expect(t < 1.0, tag + " under 1 s");
      o.note(tag + " surfaces=" + std::to_string(r.surfaces.count()) + " t=" + fmt(t) + "s");
    }
  }
  return o;
}

// two_tubes_slot at 96^3 for slot apertures 1, 5, 9.
Outcome end_to_end() {
  Outcome o;
  for (const int a : {1, 5, 9}) {
    PhantomParams pp;
    pp.dims = {96, 96, 96};
    pp.aperture = a;
    const Phantom ph = make_phantom(PhantomKind::TwoTubesSlot, pp);
    const auto t0 = Clock::now();
    const PipelineResult r = run_pipeline(ph.gray, config_for(ph));
    const double t = seconds_since(t0);
    const std::string tag = "a=" + std::to_string(a);
    o.expect(r.component_count == 2, tag + " two labels");
    const BinaryVolume l1 = select_label(r.lumen_labels, 1), l2 = select_label(r.lumen_labels, 2);
    const double straight = std::min(dice(l1, ph.truth_lumen1), dice(l2, ph.truth_lumen2));
    const double swapped = std::min(dice(l1, ph.truth_lumen2), dice(l2, ph.truth_lumen1));
    const double worst = std::max(straight, swapped);
    o.expect(worst >= 0.99, tag + " Dice >= 0.99");
    o.expect(!labels_touch(r.lumen_labels, 1, 2), tag + " labels not 26-adjacent");
    const int pieces = static_cast<int>(label_components(set_union(r.flap, r.tears),
                                                         Connectivity::Six)
                                            .count);
    o.expect(pieces == 1, tag + " flap and tears form one 6-component");
    o.expect(t < 10.0, tag + " under 10 s");
    o.note(tag + " dice=" + fmt(worst, 4) + " t=" + fmt(t) + "s");
  }
  return o;
}

// Opening versus holes closing on a thin lumen beside a large tear.
Outcome negative_control() {
  Outcome o;
  const Phantom ph = make_phantom(PhantomKind::ThinLumenBigTear, PhantomParams{});
  const BinaryVolume& thin = ph.truth_lumen2;
  const BinaryVolume lumens = region_grow(ph.gray, ph.seeds, ph.interval);

  int k = 0;
  BinaryVolume opened = lumens;
  for (int it = 1; it <= 32; ++it) {
    opened = morphological_open(lumens, StructuringElement::ball(Connectivity::Six), it);
    if (!oracle::reachable(opened, ph.seeds[0], ph.seeds[1], 26)) {
      k = it;
      break;
    }
  }
  o.expect(k > 0, "opening disconnects the lumens");
  const std::size_t kept = set_intersection(opened, thin).count();
  const double loss = 1.0 - static_cast<double>(kept) / static_cast<double>(thin.count());
  o.expect(loss > 0.20, "opening removes > 20% of the thin lumen");
  const Dims& d = thin.dims();
  int lost_sections = 0;
  for (int z = 0; z < d.nz; ++z) {
    bool had = false, has = false;
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::size_t i = d.index({x, y, z});
        had = had || thin.test(i);
        has = has || (thin.test(i) && opened.test(i));
      }
    if (had && !has) ++lost_sections;
  }
  o.expect(lost_sections >= 1, "opening erases a full transverse section");

  const PipelineResult r = run_pipeline(ph.gray, config_for(ph));
  o.expect(r.component_count == 2, "pipeline separates two lumens");
  std::uint32_t best = 1;
  if (set_intersection(select_label(r.lumen_labels, 2), thin).count() >
      set_intersection(select_label(r.lumen_labels, 1), thin).count())
    best = 2;
  const BinaryVolume plug = set_union(ph.truth_tear, r.tears);
  const double change =
      static_cast<double>(popcount_difference(select_label(r.lumen_labels, best), thin, plug)) /
      static_cast<double>(thin.count());
  o.expect(change < 0.01, "pipeline alters the thin lumen by < 1%");
  o.note("open_k=" + std::to_string(k) + " open_loss=" + fmt(100 * loss, 1) +
         "% lost_sections=" + std::to_string(lost_sections) +
         " pipeline_change=" + fmt(100 * change, 2) + "%");
  return o;
}

// Edge tear: not separated without a bridge, two lumens with one.
Outcome edge_rescue() {
  Outcome o;
  const fs::path dir = workdir("edge");
  const std::string gray = (dir / "gray.lvol").string();
  o.expect(cli({"phantom", "--kind", "edge_tear", "--out", dir.string()}).code == 0, "phantom");
  const CliRun plain = cli({"run", "--gray", gray, "--config", (dir / "config.txt").string(),
                            "--out", (dir / "plain").string()});
  o.expect(plain.code == 3, "exit 3 without a bridge");
  CliRun bridged = cli({"run", "--gray", gray, "--config",
                              (dir / "config_bridged.txt").string(), "--out",
                              (dir / "bridged").string()});
  o.expect(bridged.code == 0, "exit 0 with a bridge");
  o.expect(bridged.report["components"] == "2", "two components with a bridge");
  o.note("exit_plain=" + std::to_string(plain.code) +
         " exit_bridged=" + std::to_string(bridged.code) +
         " components=" + bridged.report["components"]);
  return o;
}

// Invariants checked against brute-force oracles.
Outcome invariants() {
  Outcome o;
  std::mt19937 rng(20240611);

  int closing_cases = 0;
  for (const ConnectivityPair pair : {ConnectivityPair{Connectivity::Six, Connectivity::TwentySix},
                                      ConnectivityPair{Connectivity::TwentySix,
                                                       Connectivity::Six}}) {
    for (const std::uint32_t s : {0u, 3u}) {
      for (int trial = 0; trial < 6; ++trial) {
        BinaryVolume x = oracle::random_volume({12, 10, 9}, 0.35, rng);
        x.set(Coord{5, 5, 5});
        const auto params = ClosingParams::for_pair(pair, s);
        const ClosingResult r = close_holes(x, params);
        const ClosingResult again = close_holes(x, params);
        auto unlimited = params;
        unlimited.max_hole_size = 0;
        o.expect(oracle::subset(x, r.filled), "closing is extensive");
        o.expect(!set_intersection(r.surfaces, x).any() && set_union(x, r.surfaces) == r.filled,
                 "surfaces are disjoint from the object");
        o.expect(r.stats.pushed == r.stats.box_voxels && r.stats.popped == r.stats.box_voxels,
                 "every box voxel pushed and popped once");
        o.expect(again.filled == r.filled && again.surfaces == r.surfaces, "closing is deterministic");
        o.expect(!close_holes(close_holes(x, unlimited).filled, unlimited).surfaces.any(),
                 "unlimited closing is idempotent");
        ++closing_cases;
      }
    }
  }

  int duality_cases = 0;
  for (const Connectivity c : {Connectivity::Six, Connectivity::TwentySix}) {
    for (int k = 1; k <= 2; ++k) {
      for (int trial = 0; trial < 3; ++trial) {
        const BinaryVolume x = oracle::random_padded({14, 12, 11}, 0.6, rng);
        const auto se = StructuringElement::ball(c);
        BinaryVolume dilated_complement = complement(x);
        for (int i = 0; i < k; ++i) dilated_complement = oracle::dilate_once(dilated_complement, to_int(c));
        o.expect(erode(x, se, k) == complement(dilated_complement), "erosion-dilation duality");
        o.expect(erode(x, se, k) == complement(dilate(complement(x), se, k)), "library duality");
        ++duality_cases;
      }
    }
  }

  int grow_cases = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const Dims d{13, 11, 9};
    GrayVolume g(d);
    std::uniform_int_distribution<int> v(0, 400);
    for (std::size_t i = 0; i < d.count(); ++i) g[i] = static_cast<std::int16_t>(v(rng));
    std::vector<Coord> seeds;
    for (int k = 0; k < 2; ++k) {
      const Coord c{static_cast<int>(rng() % 13), static_cast<int>(rng() % 11),
                    static_cast<int>(rng() % 9)};
      g[d.index(c)] = 200;
      seeds.push_back(c);
    }
    for (const Connectivity c : {Connectivity::Six, Connectivity::TwentySix}) {
      o.expect(region_grow(g, seeds, {100, 300}, c) ==
                   oracle::region_grow(g, seeds, 100, 300, to_int(c)),
               "region_grow oracle");
      ++grow_cases;
    }
  }

  const Dims cube{9, 9, 9};
  BinaryVolume point(cube);
  const Coord src{3, 5, 4};
  point.set(src);
  const DistanceMap d6 = distance_map(cube, point, Metric::D6);
  const DistanceMap d26 = distance_map(cube, point, Metric::D26);
  bool closed_form = true;
  for (std::size_t i = 0; i < cube.count(); ++i) {
    const Coord p = cube.coord(i);
    const int ax = std::abs(p.x - src.x), ay = std::abs(p.y - src.y), az = std::abs(p.z - src.z);
    closed_form = closed_form && d6[i] == static_cast<std::uint32_t>(ax + ay + az) &&
                  d26[i] == static_cast<std::uint32_t>(std::max({ax, ay, az}));
  }
  o.expect(closed_form, "distance closed form");

  int topo_mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    const Neighborhood block = static_cast<Neighborhood>(rng() & ((1u << 27) - 1));
    for (const Connectivity c : {Connectivity::Six, Connectivity::TwentySix}) {
      if (topological_number(block, c) != oracle::topological_number(block, to_int(c)))
        ++topo_mismatches;
    }
  }
  o.expect(topo_mismatches == 0, "topological numbers match the oracle");

  HierarchicalList hl(2000, 15);
  std::set<std::pair<int, std::size_t>> ref;
  std::vector<std::size_t> voxel_of;
  std::vector<bool> used(2000, false);
  int order_mismatches = 0;
  for (int step = 0; step < 20000; ++step) {
    if (rng() % 3 != 0) {
      const std::size_t v = rng() % 2000;
      const std::uint32_t dist = rng() % 16;
      if (hl.push(v, dist) != !used[v]) ++order_mismatches;
      if (!used[v]) {
        used[v] = true;
        ref.insert({-static_cast<int>(dist), voxel_of.size()});
        voxel_of.push_back(v);
      }
    } else {
      const auto got = hl.pop();
      if (ref.empty()) {
        order_mismatches += got.has_value();
        continue;
      }
      const auto top = *ref.begin();
      ref.erase(ref.begin());
      if (!got || *got != voxel_of[top.second]) ++order_mismatches;
    }
  }
  o.expect(order_mismatches == 0, "hierarchical list order");

  o.note("closing=" + std::to_string(closing_cases) + " duality=" + std::to_string(duality_cases) +
         " grow=" + std::to_string(grow_cases) + " neighborhoods=100000 topo_mismatches=" +
         std::to_string(topo_mismatches) + " list_mismatches=" + std::to_string(order_mismatches));
  return o;
}

// Full pipeline at 200x200x350.
Outcome performance() {
  Outcome o;
  PhantomParams pp;
  pp.dims = {200, 200, 350};
  const Phantom ph = make_phantom(PhantomKind::TwoTubesSlot, pp);
  const auto t0 = Clock::now();
  const PipelineResult r = run_pipeline(ph.gray, config_for(ph));
  const double t = seconds_since(t0);
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  o.expect(r.component_count == 2, "two lumens");
  o.expect(t < 60.0, "under 60 s");
  o.expect(peak_mb < 2048.0, "peak RSS under 2 GB");
  o.note("t=" + fmt(t) + "s peak_rss=" + fmt(peak_mb, 1) + "MB");
  return o;
}

// Round trips for every voxel kind and exports against the committed goldens.
Outcome io_goldens() {
  Outcome o;
  std::mt19937 rng(7);
  const Dims d{7, 5, 3};
  BinaryVolume mask = oracle::random_volume(d, 0.5, rng);
  GrayVolume gray(d);
  LabelVolume labels(d);
  for (std::size_t i = 0; i < d.count(); ++i) {
    gray[i] = static_cast<std::int16_t>(static_cast<int>(rng() % 65536) - 32768);
    labels[i] = static_cast<std::uint32_t>(rng());
  }
  const fs::path dir = workdir("io");
  for (const AnyVolume& v : {AnyVolume{mask}, AnyVolume{gray}, AnyVolume{labels}}) {
    const auto bytes = encode_volume(v);
    o.expect(decode_volume(bytes) == v, "in-memory round trip");
    write_volume(dir / "v.lvol", v);
    o.expect(read_volume(dir / "v.lvol") == v, "file round trip");
    o.expect(encode_volume(read_volume(dir / "v.lvol")) == bytes, "bytes stable");
  }

  const fs::path golden = LUMENSEP_GOLDEN_DIR;
  const auto p = [&](const char* n) { return (dir / n).string(); };
  o.expect(cli({"phantom", "--kind", "two_tubes_slot", "--size", "32", "--aperture", "5", "--out",
                dir.string()})
                   .code == 0,
           "phantom");
  o.expect(cli({"run", "--gray", p("gray.lvol"), "--config", p("config.txt"), "--out", p("run")})
                   .code == 0,
           "run");
  cli({"export-slice", "--in", p("run/cartography.lvol"), "--axis", "z", "--index", "16", "--out",
       p("cartography_z16.pgm")});
  cli({"export-slice", "--in", p("run/cartography.lvol"), "--axis", "x", "--index", "16", "--out",
       p("cartography_x16.pgm")});
  cli({"export-slice", "--in", p("gray.lvol"), "--axis", "y", "--index", "16", "--window", "0,300",
       "--out", p("gray_y16.pgm")});
  cli({"export-points", "--in", p("run/cartography.lvol"), "--label", "4", "--out",
       p("tears.txt")});
  cli({"export-points", "--in", p("run/tears.lvol"), "--out", p("tear_mask.txt")});
  int identical = 0;
  for (const char* name : {"cartography_z16.pgm", "cartography_x16.pgm", "gray_y16.pgm",
                           "tears.txt", "tear_mask.txt"}) {
    const bool same = fs::exists(golden / name) && slurp(dir / name) == slurp(golden / name);
    o.expect(same, std::string(name) + " matches golden");
    identical += same;
  }
  o.note("kinds=3 goldens_identical=" + std::to_string(identical) + "/5");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"torus closure (d26, s=4 and s=0)", torus_closure},
      {"end-to-end separation on two_tubes_slot", end_to_end},
      {"negative control on thin_lumen_big_tear", negative_control},
      {"edge-tear rescue", edge_rescue},
      {"algorithmic invariant suite", invariants},
      {"performance at 200x200x350", performance},
      {"I/O round trip and goldens", io_goldens},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    std::string detail;
    for (const auto& s : o.notes) detail += (detail.empty() ? "" : "; ") + s;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%d criteria passed\n", n - failures, n);
  return failures == 0 ? 0 : 1;
}
