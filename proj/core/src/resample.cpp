#include "petct/resample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace petct {

namespace {

constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}

double sample_nearest(const Volume3& vol, const std::array<double, 3>& p,
                      double pad) {
  const int x = static_cast<int>(std::llround(p[0]));
  const int y = static_cast<int>(std::llround(p[1]));
  const int z = static_cast<int>(std::llround(p[2]));
  return vol.in_bounds(x, y, z) ? vol.at(x, y, z) : pad;
}

double sample_trilinear(const Volume3& vol, const std::array<double, 3>& p,
                        double pad) {
  const double fx = std::floor(p[0]);
  const double fy = std::floor(p[1]);
  const double fz = std::floor(p[2]);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const int z0 = static_cast<int>(fz);
  const double wx = p[0] - fx;
  const double wy = p[1] - fy;
  const double wz = p[2] - fz;

  double acc = 0.0;
  for (int dz = 0; dz <= 1; ++dz) {
    const double cz = dz ? wz : 1.0 - wz;
    if (cz == 0.0) continue;
    for (int dy = 0; dy <= 1; ++dy) {
      const double cy = dy ? wy : 1.0 - wy;
      if (cy == 0.0) continue;
      for (int dx = 0; dx <= 1; ++dx) {
        const double cx = dx ? wx : 1.0 - wx;
        if (cx == 0.0) continue;
        const int x = x0 + dx, y = y0 + dy, z = z0 + dz;
        const double v = vol.in_bounds(x, y, z) ? vol.at(x, y, z) : pad;
        acc += cx * cy * cz * v;
      }
    }
  }
  return acc;
}

}  // namespace

std::string to_string(Interp interp) {
  return interp == Interp::kNearest ? "nearest" : "trilinear";
}

Interp interp_from_string(const std::string& name) {
  if (name == "nearest" || name == "NEAREST") return Interp::kNearest;
  if (name == "trilinear" || name == "TRILINEAR") return Interp::kTrilinear;
  throw std::invalid_argument("unknown interpolation mode: " + name);
}

std::array<double, 3> volume_center(const Volume3& vol) {
  return {(vol.dims[0] - 1) / 2.0, (vol.dims[1] - 1) / 2.0,
          (vol.dims[2] - 1) / 2.0};
}

VoxelAffine rigid_inverse_map(const Volume3& vol, const RigidParams& params) {
  // Forward: p_out = R(p_in - c) + c + t, so p_in = R^T(p_out - c - t) + c.
  const auto c = volume_center(vol);
  const double a = deg_to_rad(params.rotation_deg);
  const double cs = std::cos(a), sn = std::sin(a);
  const auto& t = params.shift_voxels;

  VoxelAffine inv;
  // R^T rows for rotation about z.
  inv.m = {cs,  sn, 0, 0,
           -sn, cs, 0, 0,
           0,   0,  1, 0};
  const double ox = c[0] + t[0], oy = c[1] + t[1], oz = c[2] + t[2];
  inv.m[3] = c[0] - (cs * ox + sn * oy);
  inv.m[7] = c[1] - (-sn * ox + cs * oy);
  inv.m[11] = c[2] - oz;
  return inv;
}

VoxelAffine rotation_scale_inverse_map(const Volume3& vol, double rotation_deg,
                                       double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("rotation_scale_inverse_map: scale must be > 0");
  }
  // Forward: p_out = s * R(p_in - c) + c, so p_in = (1/s) R^T(p_out - c) + c.
  const auto c = volume_center(vol);
  const double a = deg_to_rad(rotation_deg);
  const double k = 1.0 / scale;
  const double cs = k * std::cos(a), sn = k * std::sin(a);

  VoxelAffine inv;
  inv.m = {cs,  sn, 0, 0,
           -sn, cs, 0, 0,
           0,   0,  k, 0};
  inv.m[3] = c[0] - (cs * c[0] + sn * c[1]);
  inv.m[7] = c[1] - (-sn * c[0] + cs * c[1]);
  inv.m[11] = c[2] - k * c[2];
  return inv;
}

Volume3 resample(const Volume3& vol, const VoxelAffine& out_to_in,
                 Interp interp, double pad_value) {
  if (vol.voxel_count() == 0) {
    throw std::invalid_argument("resample: empty volume");
  }
  Volume3 out = vol;
  const auto [nx, ny, nz] = vol.dims;
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const auto p = out_to_in.apply(x, y, z);
        out.data[out.index(x, y, z)] =
            interp == Interp::kNearest ? sample_nearest(vol, p, pad_value)
                                       : sample_trilinear(vol, p, pad_value);
      }
    }
  }
  return out;
}

Volume3 apply_rigid(const Volume3& vol, const RigidParams& params,
                    Interp interp, double pad_value) {
  if (vol.voxel_count() == 0) {
    throw std::invalid_argument("apply_rigid: empty volume");
  }
  if (params.is_identity()) return vol;
  return resample(vol, rigid_inverse_map(vol, params), interp, pad_value);
}

}  // namespace petct
