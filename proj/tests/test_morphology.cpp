#include <doctest.h>

#include <cstdlib>
#include <random>

#include "lumensep/morphology.hpp"
#include "oracles.hpp"

using namespace lumensep;

namespace {

const StructuringElement kBalls[] = {StructuringElement::ball(Connectivity::Six),
                                     StructuringElement::ball(Connectivity::Eighteen),
                                     StructuringElement::ball(Connectivity::TwentySix)};

BinaryVolume point(const Dims& d, const Coord& c) {
  BinaryVolume v(d);
  v.set(c);
  return v;
}

}  // namespace

TEST_CASE("dilation of a single voxel") {
  const Dims d{9, 9, 9};
  const BinaryVolume p = point(d, {4, 4, 4});
  CHECK(dilate(p, StructuringElement::ball(Connectivity::Six), 1).count() == 7);
  CHECK(dilate(p, StructuringElement::ball(Connectivity::Eighteen), 1).count() == 19);
  BinaryVolume block(d);
  oracle::fill(block, {{3, 3, 3}, {6, 6, 6}});
  CHECK(dilate(p, StructuringElement::ball(Connectivity::TwentySix), 1) == block);

  const BinaryVolume oct = dilate(p, StructuringElement::ball(Connectivity::Six), 2);
  CHECK(oct.count() == 25);
  for (std::size_t i = 0; i < d.count(); ++i) {
    const Coord c = d.coord(i);
    const int l1 = std::abs(c.x - 4) + std::abs(c.y - 4) + std::abs(c.z - 4);
    CHECK(oct.test(i) == (l1 <= 2));
  }
}

TEST_CASE("dilation is clipped to dims") {
  const BinaryVolume p = point({3, 3, 3}, {0, 0, 0});
  CHECK(dilate(p, StructuringElement::ball(Connectivity::TwentySix), 1).count() == 8);
  CHECK(dilate(p, StructuringElement::ball(Connectivity::Six), 5).count() == 26);
  CHECK(dilate(p, StructuringElement::ball(Connectivity::Six), 6).count() == 27);
}

TEST_CASE("dilation matches the direct definition") {
  std::mt19937 rng(9);
  for (const auto& se : kBalls) {
    const BinaryVolume x = oracle::random_volume({10, 7, 6}, 0.08, rng);
    CHECK(dilate(x, se, 1) == oracle::dilate_once(x, to_int(se.connectivity)));
  }
}

TEST_CASE("erosion examples") {
  BinaryVolume block({5, 5, 5});
  oracle::fill(block, {{1, 1, 1}, {4, 4, 4}});
  CHECK(erode(block, StructuringElement::ball(Connectivity::TwentySix), 1) ==
        point({5, 5, 5}, {2, 2, 2}));
  // Border voxels count as background.
  BinaryVolume full({3, 3, 3});
  oracle::fill(full, {{0, 0, 0}, {3, 3, 3}});
  CHECK(erode(full, StructuringElement::ball(Connectivity::Six), 1) == point({3, 3, 3}, {1, 1, 1}));
}

TEST_CASE("iterations must be positive") {
  const BinaryVolume x({3, 3, 3});
  const auto se = StructuringElement::ball(Connectivity::Six);
  CHECK_THROWS_AS(dilate(x, se, 0), PreconditionError);
  CHECK_THROWS_AS(erode(x, se, 0), PreconditionError);
  CHECK_THROWS_AS(morphological_close(x, se, 0), PreconditionError);
  CHECK_THROWS_AS(morphological_open(x, se, -1), PreconditionError);
}

TEST_CASE("erosion and dilation are dual on padded volumes") {
  std::mt19937 rng(17);
  for (const auto& se : kBalls) {
    for (int trial = 0; trial < 8; ++trial) {
      const BinaryVolume x = oracle::random_padded({9, 8, 7}, 0.6, rng);
      CHECK(erode(x, se, 1) == complement(dilate(complement(x), se, 1)));
      CHECK(oracle::subset(erode(x, se, 1), x));
    }
  }
}

TEST_CASE("erosion and dilation are dual for several iterations with a wide border") {
  std::mt19937 rng(19);
  for (const auto& se : kBalls) {
    for (int k = 1; k <= 3; ++k) {
      // Keep the object k voxels away from the border so clipping cannot differ.
      const BinaryVolume core = oracle::random_padded({8, 8, 8}, 0.7, rng);
      const BinaryVolume x = pad(core, k - 1);
      CHECK(erode(x, se, k) == complement(dilate(complement(x), se, k)));
    }
  }
}

TEST_CASE("monotonicity and iteration composition") {
  std::mt19937 rng(23);
  for (const auto& se : kBalls) {
    const BinaryVolume b = oracle::random_volume({10, 9, 8}, 0.5, rng);
    const BinaryVolume a = set_intersection(b, oracle::random_volume({10, 9, 8}, 0.6, rng));
    CHECK(oracle::subset(dilate(a, se, 1), dilate(b, se, 1)));
    CHECK(oracle::subset(erode(a, se, 1), erode(b, se, 1)));
    const BinaryVolume s = oracle::random_padded({10, 9, 8}, 0.05, rng);
    CHECK(dilate(s, se, 3) == dilate(dilate(s, se, 1), se, 2));
    CHECK(dilate(s, se, 2) == dilate(dilate(s, se, 1), se, 1));
    CHECK(oracle::subset(s, morphological_close(s, se, 1)));
    CHECK(oracle::subset(morphological_open(b, se, 1), b));
  }
}

TEST_CASE("closing fills the gap between two slabs") {
  // Slabs at z=2 and z=5 over a 5x5 footprint with two empty planes between.
  // A 6-ball closing fills the gap except along the footprint rim, where the
  // dilated slabs do not cover the diagonal.
  const Dims d{7, 7, 8};
  BinaryVolume x(d);
  oracle::fill(x, {{1, 1, 2}, {6, 6, 3}});
  oracle::fill(x, {{1, 1, 5}, {6, 6, 6}});
  const BinaryVolume closed =
      morphological_close(pad(x, 1), StructuringElement::ball(Connectivity::Six), 1);
  const BinaryVolume c = crop(closed, {{1, 1, 1}, {8, 8, 9}});
  BinaryVolume gap(d);
  oracle::fill(gap, {{2, 2, 3}, {5, 5, 5}});
  CHECK(set_difference(c, x) == gap);
  const BinaryVolume dil = oracle::dilate_once(pad(x, 1), 6);
  CHECK(closed == complement(oracle::dilate_once(complement(dil), 6)));
}

TEST_CASE("closing leaves a convex solid unchanged") {
  const Dims d{21, 21, 21};
  BinaryVolume ball(d);
  for (std::size_t i = 0; i < d.count(); ++i) {
    const Coord c = d.coord(i);
    const int r2 = (c.x - 10) * (c.x - 10) + (c.y - 10) * (c.y - 10) + (c.z - 10) * (c.z - 10);
    ball.set(i, r2 <= 36);
  }
  CHECK(morphological_close(ball, StructuringElement::ball(Connectivity::Six), 2) == ball);
  BinaryVolume box(d);
  oracle::fill(box, {{5, 5, 5}, {15, 12, 14}});
  for (const auto& se : kBalls) CHECK(morphological_close(box, se, 3) == box);
}

TEST_CASE("region growing examples") {
  const Dims d{12, 12, 10};
  GrayVolume uniform(d, 300);
  const std::vector<Coord> center{{6, 6, 5}};
  CHECK(region_grow(uniform, center, {200, 400}).count() == d.count());

  GrayVolume tube(d, 0);
  BinaryVolume truth(d);
  for (std::size_t i = 0; i < d.count(); ++i) {
    const Coord c = d.coord(i);
    const int r2 = (c.x - 6) * (c.x - 6) + (c.y - 6) * (c.y - 6);
    if (r2 <= 9) {
      tube[i] = 300;
      truth.set(i);
    } else if (r2 <= 20) {
      tube[i] = 60;
    }
  }
  const BinaryVolume grown = region_grow(tube, center, {200, 400});
  CHECK(grown == truth);
  const std::vector<Coord> two{{6, 6, 5}, {6, 6, 0}};
  CHECK(region_grow(tube, two, {200, 400}) == grown);
  CHECK(grown == oracle::region_grow(tube, center, 200, 400, 26));
}

TEST_CASE("region growing errors name the seed") {
  GrayVolume g({4, 4, 4}, 100);
  const std::vector<Coord> outside{{4, 0, 0}};
  const std::vector<Coord> dark{{1, 1, 1}};
  CHECK_THROWS_WITH_AS(region_grow(g, outside, {0, 200}), doctest::Contains("(4,0,0)"),
                       PreconditionError);
  CHECK_THROWS_WITH_AS(region_grow(g, dark, {150, 200}), doctest::Contains("(1,1,1)"),
                       PreconditionError);
  CHECK_THROWS_AS(region_grow(g, dark, {200, 100}), PreconditionError);
}

TEST_CASE("region growing equals the threshold-label-select oracle") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> val(0, 500);
  for (int trial = 0; trial < 12; ++trial) {
    const Dims d{9, 8, 7};
    GrayVolume g(d);
    for (std::size_t i = 0; i < d.count(); ++i) g[i] = static_cast<std::int16_t>(val(rng));
    const int low = 150, high = 450;
    std::vector<Coord> seeds;
    for (std::size_t i = 0; i < d.count() && seeds.size() < 3; i += 37) {
      if (g[i] >= low && g[i] <= high) seeds.push_back(d.coord(i));
    }
    REQUIRE(!seeds.empty());
    for (const int c : {6, 26}) {
      CHECK(region_grow(g, seeds, {low, high}, connectivity_from_int(c)) ==
            oracle::region_grow(g, seeds, low, high, c));
    }
  }
}
