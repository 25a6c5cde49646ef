#include "lumensep/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

#include "lumensep/labeling.hpp"

namespace lumensep {

namespace {

template <typename E>
[[noreturn]] void rethrow_in_stage(const char* stage, const E& e) {
  throw E(std::string("stage '") + stage + "': " + e.what());
}

// Runs f, prefixing any library error with the stage name while keeping its type.
template <typename F>
auto in_stage(const char* stage, std::vector<StageTiming>& timings, F&& f) -> decltype(f()) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    timings.push_back({stage, dt.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto r = f();
      record();
      return r;
    }
  } catch (const NotSeparatedError& e) {
    rethrow_in_stage(stage, e);
  } catch (const DisconnectedError& e) {
    rethrow_in_stage(stage, e);
  } catch (const PreconditionError& e) {
    rethrow_in_stage(stage, e);
  } catch (const BadMagicError& e) {
    rethrow_in_stage(stage, e);
  } catch (const TruncatedError& e) {
    rethrow_in_stage(stage, e);
  } catch (const UnknownKindError& e) {
    rethrow_in_stage(stage, e);
  } catch (const IoError& e) {
    rethrow_in_stage(stage, e);
  } catch (const Error& e) {
    rethrow_in_stage(stage, e);
  }
}

Coord shifted(const Coord& c, const Coord& by) { return {c.x - by.x, c.y - by.y, c.z - by.z}; }

}  // namespace

void PipelineConfig::validate(const Dims& volume) const {
  if (close_iterations < 1) throw PreconditionError("close_n must be >= 1");
  if (prefilter_iterations < 0) throw PreconditionError("prefilter must be >= 0");
  if (grow_interval.low > grow_interval.high) {
    throw PreconditionError("intensity interval low exceeds high");
  }
  if (grow_connectivity == Connectivity::Eighteen) {
    throw PreconditionError("region growing connectivity must be 6 or 26");
  }
  closing.validate();
  if (seeds.empty()) throw PreconditionError("at least one seed is required");
  if (crop) {
    const Box& b = *crop;
    if (!volume.contains(b.lo) || b.hi.x > volume.nx || b.hi.y > volume.ny ||
        b.hi.z > volume.nz || b.hi.x <= b.lo.x || b.hi.y <= b.lo.y || b.hi.z <= b.lo.z) {
      throw PreconditionError("crop box " + to_string(b.lo) + "-" + to_string(b.hi) +
                              " is not inside volume " + to_string(volume));
    }
  }
  const Box frame = crop.value_or(Box{{0, 0, 0}, {volume.nx, volume.ny, volume.nz}});
  for (const auto& s : seeds) {
    if (!frame.contains(s)) {
      throw PreconditionError("seed " + to_string(s) + " lies outside the processed region");
    }
  }
  for (const auto& br : bridges) {
    if (!frame.contains(br.a) || !frame.contains(br.b)) {
      throw PreconditionError("bridge endpoint outside the processed region");
    }
  }
}

BinaryVolume extract_flap(const BinaryVolume& lumens, int n, StructuringElement se) {
  if (n < 1) throw PreconditionError("extract_flap: closing depth must be >= 1");
  if (!lumens.any()) throw PreconditionError("extract_flap: lumens are empty");
  const BinaryVolume closed = morphological_close(pad(lumens, n), se, n);
  const Dims& d = lumens.dims();
  BinaryVolume flap = crop(closed, Box{{n, n, n}, {n + d.nx, n + d.ny, n + d.nz}});
  flap.set_spacing(lumens.spacing());
  return set_difference(flap, lumens);
}

BinaryVolume tear_surfaces(const BinaryVolume& flap, ClosingParams closing) {
  if (!flap.any()) throw PreconditionError("tear_surfaces: flap is empty");
  closing.max_hole_size = 0;
  return surfaces_only(flap, closing);
}

Separation separate_lumens(const BinaryVolume& lumens, const BinaryVolume& tears) {
  if (!lumens.any()) throw PreconditionError("separate_lumens: lumens are empty");
  const Components cc = label_components(set_difference(lumens, tears), Connectivity::TwentySix);
  if (cc.count < 2) {
    throw NotSeparatedError("lumens not separated: " + std::to_string(cc.count) +
                            " component(s) after removing the tear surfaces");
  }
  const auto sizes = label_sizes(cc.labels, cc.count);
  std::vector<std::uint32_t> order(cc.count);
  for (std::uint32_t i = 0; i < cc.count; ++i) order[i] = i + 1;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return sizes[a] > sizes[b]; });
  const std::uint32_t first = std::min(order[0], order[1]);
  const std::uint32_t second = std::max(order[0], order[1]);

  Separation out{LabelVolume(lumens.dims(), 0, lumens.spacing()), cc.count, 0};
  for (std::size_t i = 0; i < cc.labels.size(); ++i) {
    const std::uint32_t l = cc.labels[i];
    if (l == 0) continue;
    if (l == first) {
      out.labels[i] = kLumen1Label;
    } else if (l == second) {
      out.labels[i] = kLumen2Label;
    } else {
      ++out.discarded_voxels;
    }
  }
  return out;
}

BinaryVolume expand_flap(const BinaryVolume& flap, const BinaryVolume& lumens, const Coord& a,
                         const Coord& b, Metric m) {
  if (flap.dims() != lumens.dims()) {
    throw PreconditionError("expand_flap: flap and lumens dimensions differ");
  }
  for (const Coord* e : {&a, &b}) {
    if (!lumens.dims().contains(*e)) {
      throw PreconditionError("expand_flap: endpoint " + to_string(*e) + " outside volume");
    }
    if (lumens.test(*e)) {
      throw PreconditionError("expand_flap: endpoint " + to_string(*e) + " lies inside the lumens");
    }
  }
  BinaryVolume out = flap;
  for (const auto& c : shortest_path(complement(lumens), a, b, m)) out.set(c);
  return out;
}

Cartography build_cartography(const LabelVolume& lumen_labels, const BinaryVolume& flap,
                              const BinaryVolume& tears) {
  const Dims& d = lumen_labels.dims();
  if (flap.dims() != d || tears.dims() != d) {
    throw PreconditionError("build_cartography: dimension mismatch");
  }
  Cartography out(d, kBackgroundLabel, lumen_labels.spacing());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (tears.test(i)) {
      out[i] = kTearLabel;
    } else if (flap.test(i)) {
      out[i] = kFlapLabel;
    } else {
      const std::uint32_t l = lumen_labels[i];
      if (l > kLumen2Label) {
        throw PreconditionError("build_cartography: lumen labels must be 0, 1 or 2");
      }
      out[i] = l;
    }
  }
  return out;
}

PipelineResult run_pipeline(const GrayVolume& gray, const PipelineConfig& cfg) {
  cfg.validate(gray.dims());
  PipelineResult r;
  const Dims full = gray.dims();
  const Coord origin = cfg.crop ? cfg.crop->lo : Coord{0, 0, 0};

  const GrayVolume g = in_stage("crop", r.timings, [&] {
    return cfg.crop ? crop(gray, *cfg.crop) : gray;
  });

  BinaryVolume lumens = in_stage("segment", r.timings, [&] {
    std::vector<Coord> seeds;
    for (const auto& s : cfg.seeds) seeds.push_back(shifted(s, origin));
    return region_grow(g, seeds, cfg.grow_interval, cfg.grow_connectivity);
  });

  if (cfg.prefilter_iterations > 0) {
    lumens = in_stage("prefilter", r.timings, [&] {
      return morphological_open(lumens, StructuringElement::ball(Connectivity::Six),
                                cfg.prefilter_iterations);
    });
  }

  BinaryVolume flap = in_stage("flap", r.timings,
                               [&] { return extract_flap(lumens, cfg.close_iterations); });

  if (!cfg.bridges.empty()) {
    flap = in_stage("expand-flap", r.timings, [&] {
      BinaryVolume f = flap;
      for (const auto& br : cfg.bridges) {
        f = expand_flap(f, lumens, shifted(br.a, origin), shifted(br.b, origin), br.metric);
      }
      return f;
    });
  }

  const BinaryVolume tears =
      in_stage("close-holes", r.timings, [&] { return tear_surfaces(flap, cfg.closing); });

  Separation sep =
      in_stage("separate", r.timings, [&] { return separate_lumens(lumens, tears); });

  Cartography carto = in_stage("cartography", r.timings, [&] {
    return build_cartography(sep.labels, flap, set_intersection(tears, lumens));
  });

  const bool cropped = cfg.crop.has_value();
  r.cartography = cropped ? embed(carto, origin, full) : std::move(carto);
  r.lumens = cropped ? embed(lumens, origin, full) : std::move(lumens);
  r.flap = cropped ? embed(flap, origin, full) : std::move(flap);
  r.tears = cropped ? embed(tears, origin, full) : tears;
  r.lumen_labels = cropped ? embed(sep.labels, origin, full) : std::move(sep.labels);
  r.component_count = sep.component_count;
  r.discarded_voxels = sep.discarded_voxels;
  return r;
}

}  // namespace lumensep
