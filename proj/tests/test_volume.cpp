#include <doctest.h>

#include <random>

#include "petct/components.hpp"
#include "petct/volume.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace petct;
using namespace petct::testing;

TEST_CASE("volume validation catches broken invariants") {
  Volume3 vol({2, 2, 2}, {1.0, 1.0, 1.0}, VolumeKind::kHU);
  CHECK_NOTHROW(vol.validate());

  Volume3 short_data = vol;
  short_data.data.pop_back();
  CHECK_THROWS_AS(short_data.validate(), std::invalid_argument);

  Volume3 bad_spacing = vol;
  bad_spacing.spacing[1] = 0.0;
  CHECK_THROWS_AS(bad_spacing.validate(), std::invalid_argument);

  Volume3 bad_binary = vol;
  bad_binary.kind = VolumeKind::kBinary;
  bad_binary.data[3] = 0.5;
  CHECK_THROWS_AS(bad_binary.validate(), std::invalid_argument);

  Volume3 bad_prob = vol;
  bad_prob.kind = VolumeKind::kProb;
  bad_prob.data[0] = 1.5;
  CHECK_THROWS_AS(bad_prob.validate(), std::invalid_argument);
}

TEST_CASE("mirror flips a 2x1x1 volume along x") {
  Volume3 vol({2, 1, 1}, {1.0, 1.0, 1.0}, VolumeKind::kHU);
  vol.data = {3.0, 7.0};
  const Volume3 flipped = mirror(vol, {.x = true});
  CHECK(flipped.data == std::vector<double>{7.0, 3.0});
  CHECK(flipped.dims == vol.dims);
  CHECK(flipped.spacing == vol.spacing);
}

TEST_CASE("mirror with no axes is the identity") {
  std::mt19937_64 gen(11);
  const Volume3 vol = random_volume(gen, {4, 3, 2}, VolumeKind::kSUV, 0.0, 10.0);
  CHECK(mirror(vol, {}) == vol);
}

TEST_CASE("mirror is an involution on every axis subset") {
  std::mt19937_64 gen(12);
  const Volume3 vol = random_volume(gen, {5, 4, 3}, VolumeKind::kHU, -100.0, 100.0);
  for (int mask = 0; mask < 8; ++mask) {
    const MirrorAxes axes{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
    CAPTURE(mask);
    CHECK(mirror(mirror(vol, axes), axes) == vol);
  }
}

TEST_CASE("volume_ml worked examples") {
  CHECK(volume_ml(0, {2.0, 2.0, 2.0}) == 0.0);
  CHECK(volume_ml(5, {2.0, 2.0, 2.0}) == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(volume_ml(1000, {1.0, 1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("volume_ml is linear in the voxel count") {
  const std::array<double, 3> spacing{1.5, 2.0, 3.25};
  const double unit = volume_ml(1, spacing);
  for (std::size_t n : {2ul, 10ul, 977ul}) {
    CHECK(volume_ml(n, spacing) == doctest::Approx(static_cast<double>(n) * unit).epsilon(1e-12));
  }
}

TEST_CASE("connected components on two isolated corner voxels") {
  Volume3 vol({4, 4, 4}, {1.0, 1.0, 1.0}, VolumeKind::kBinary);
  vol.at(0, 0, 0) = 1.0;
  vol.at(3, 3, 3) = 1.0;
  const auto labeling = connected_components(vol, Connectivity::k26);
  CHECK(labeling.component_count == 2);
  CHECK(labeling.component_voxel_counts == std::vector<std::size_t>{1, 1});
  CHECK(labeling.labels[vol.index(0, 0, 0)] == 1);
  CHECK(labeling.labels[vol.index(3, 3, 3)] == 2);
}

TEST_CASE("in-plane diagonal neighbors merge at 26 and 18 but not 6") {
  Volume3 vol({2, 2, 1}, {1.0, 1.0, 1.0}, VolumeKind::kBinary);
  vol.at(0, 0, 0) = 1.0;
  vol.at(1, 1, 0) = 1.0;
  CHECK(connected_components(vol, Connectivity::k26).component_count == 1);
  CHECK(connected_components(vol, Connectivity::k18).component_count == 1);
  CHECK(connected_components(vol, Connectivity::k6).component_count == 2);
}

TEST_CASE("connected components of an empty volume") {
  Volume3 vol({3, 3, 3}, {1.0, 1.0, 1.0}, VolumeKind::kBinary);
  const auto labeling = connected_components(vol, Connectivity::k6);
  CHECK(labeling.component_count == 0);
  CHECK(labeling.component_voxel_counts.empty());
}

TEST_CASE("connected components rejects non-binary volumes") {
  Volume3 vol({2, 2, 2}, {1.0, 1.0, 1.0}, VolumeKind::kHU);
  CHECK_THROWS_AS(connected_components(vol, Connectivity::k26), std::invalid_argument);
}

TEST_CASE("connected components agree with the relaxation oracle on random grids") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const Volume3 vol = random_binary(gen, {6, 6, 6}, 0.35);
    for (int conn : {6, 18, 26}) {
      CAPTURE(trial);
      CAPTURE(conn);
      const auto ours = connected_components(vol, connectivity_from_int(conn));
      const auto expected = oracle_components(vol, conn);
      REQUIRE(ours.component_count == expected.count);
      REQUIRE(ours.component_voxel_counts == expected.voxel_counts);
      // Label ids must agree exactly: both orderings are by first linear index.
      for (std::size_t i = 0; i < vol.data.size(); ++i) {
        REQUIRE(static_cast<std::int64_t>(ours.labels[i]) == expected.labels[i]);
      }
    }
  }
}

TEST_CASE("component voxel counts sum to the foreground size") {
  std::mt19937_64 gen(77);
  const Volume3 vol = random_binary(gen, {8, 7, 6}, 0.3);
  const auto labeling = connected_components(vol, Connectivity::k26);
  std::size_t foreground = 0;
  for (double v : vol.data) foreground += v != 0.0;
  std::size_t total = 0;
  for (std::size_t c : labeling.component_voxel_counts) total += c;
  CHECK(total == foreground);
}
