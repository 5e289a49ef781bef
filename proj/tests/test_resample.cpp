#include <doctest.h>

#include <cmath>
#include <random>

#include "petct/resample.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace petct;
using namespace petct::testing;

TEST_CASE("identity rigid params return the input bitwise") {
  std::mt19937_64 gen(21);
  const Volume3 vol = random_volume(gen, {5, 4, 3}, VolumeKind::kHU, -500.0, 500.0);
  for (Interp interp : {Interp::kNearest, Interp::kTrilinear}) {
    CHECK(bitwise_equal(apply_rigid(vol, RigidParams{}, interp, -1000.0), vol));
  }
}

TEST_CASE("unit x shift with NEAREST equals the index-shift oracle") {
  std::mt19937_64 gen(22);
  const Volume3 vol = random_volume(gen, {6, 5, 4}, VolumeKind::kHU, -100.0, 100.0);
  const RigidParams params{0.0, {1.0, 0.0, 0.0}};
  const Volume3 out = apply_rigid(vol, params, Interp::kNearest, -1000.0);
  CHECK(out == oracle_index_shift(vol, 1, 0, 0, -1000.0));
}

TEST_CASE("random integer shifts with NEAREST match the oracle on 1000 volumes") {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> dim_dist(2, 16);
  std::uniform_int_distribution<int> shift_dist(-3, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::array<int, 3> dims{dim_dist(gen), dim_dist(gen), dim_dist(gen)};
    const Volume3 vol = random_volume(gen, dims, VolumeKind::kSUV, 0.0, 20.0);
    const int dx = shift_dist(gen), dy = shift_dist(gen), dz = shift_dist(gen);
    const RigidParams params{0.0, {static_cast<double>(dx), static_cast<double>(dy),
                                   static_cast<double>(dz)}};
    CAPTURE(trial);
    CHECK(apply_rigid(vol, params, Interp::kNearest, 0.0) ==
          oracle_index_shift(vol, dx, dy, dz, 0.0));
  }
}

TEST_CASE("90 degree rotation moves a hot voxel to the analytic index") {
  // 4x4x1 grid, center (1.5, 1.5, 0). Voxel (2,1) sits at offset (0.5,-0.5);
  // R(90) maps that to (0.5, 0.5), i.e. voxel (2,2).
  Volume3 vol({4, 4, 1}, {1.0, 1.0, 1.0}, VolumeKind::kSUV);
  vol.at(2, 1, 0) = 9.0;
  const RigidParams params{90.0, {0.0, 0.0, 0.0}};
  const Volume3 out = apply_rigid(vol, params, Interp::kNearest, 0.0);
  CHECK(out.at(2, 2, 0) == 9.0);
  double total = 0.0;
  for (double v : out.data) total += v;
  CHECK(total == 9.0);
}

TEST_CASE("trilinear resampling reproduces a linear field on interior voxels") {
  // f(x,y,z) = a x + b y + c z is preserved exactly by trilinear weights, so
  // the output must equal f at the analytically inverse-mapped coordinate.
  const double a = 0.75, b = -1.25, c = 2.0;
  Volume3 vol({9, 9, 7}, {1.0, 1.0, 1.0}, VolumeKind::kHU);
  for (int z = 0; z < 7; ++z)
    for (int y = 0; y < 9; ++y)
      for (int x = 0; x < 9; ++x) vol.at(x, y, z) = a * x + b * y + c * z;

  std::mt19937_64 gen(24);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const RigidParams params{angle(gen), {shift(gen), shift(gen), shift(gen)}};
    const Volume3 out = apply_rigid(vol, params, Interp::kTrilinear, 1e9);
    const VoxelAffine inv = rigid_inverse_map(vol, params);
    CAPTURE(trial);
    for (int z = 0; z < 7; ++z) {
      for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 9; ++x) {
          const auto src = inv.apply(x, y, z);
          const bool interior =
              src[0] >= 0.0 && src[0] <= 8.0 && src[1] >= 0.0 && src[1] <= 8.0 &&
              src[2] >= 0.0 && src[2] <= 6.0 && std::ceil(src[0]) <= 8.0 &&
              std::ceil(src[1]) <= 8.0 && std::ceil(src[2]) <= 6.0;
          if (!interior) continue;
          const double expected = a * src[0] + b * src[1] + c * src[2];
          REQUIRE(out.at(x, y, z) == doctest::Approx(expected).epsilon(0).scale(1).margin(1e-6));
        }
      }
    }
  }
}

TEST_CASE("out-of-bounds reads produce the pad value") {
  Volume3 vol({3, 3, 3}, {1.0, 1.0, 1.0}, VolumeKind::kHU, 100.0);
  const RigidParams params{0.0, {2.0, 0.0, 0.0}};
  const Volume3 nearest = apply_rigid(vol, params, Interp::kNearest, -1000.0);
  CHECK(nearest.at(0, 0, 0) == -1000.0);
  CHECK(nearest.at(1, 1, 1) == -1000.0);
  CHECK(nearest.at(2, 1, 1) == 100.0);

  const RigidParams half{0.0, {0.5, 0.0, 0.0}};
  const Volume3 trilinear = apply_rigid(vol, half, Interp::kTrilinear, 0.0);
  // x=0 blends the pad (weight 1/2) with the edge voxel.
  CHECK(trilinear.at(0, 1, 1) == doctest::Approx(50.0));
}

TEST_CASE("apply_rigid rejects empty volumes") {
  Volume3 empty;
  CHECK_THROWS_AS(apply_rigid(empty, RigidParams{0.0, {1.0, 0.0, 0.0}},
                              Interp::kNearest, 0.0),
                  std::invalid_argument);
}

TEST_CASE("rigid params identity predicate") {
  CHECK(RigidParams{}.is_identity());
  CHECK_FALSE(RigidParams{0.1, {0.0, 0.0, 0.0}}.is_identity());
  CHECK_FALSE(RigidParams{0.0, {0.0, -0.5, 0.0}}.is_identity());
}
