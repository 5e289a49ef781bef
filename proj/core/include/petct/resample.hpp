#ifndef PETCT_RESAMPLE_HPP
#define PETCT_RESAMPLE_HPP

#include <array>

#include "petct/volume.hpp"

namespace petct {

enum class Interp : std::uint8_t { kNearest, kTrilinear };

std::string to_string(Interp interp);
Interp interp_from_string(const std::string& name);

/// Rigid perturbation in voxel space: rotation about the z (craniocaudal)
/// axis around the volume center, followed by a continuous voxel shift.
struct RigidParams {
  double rotation_deg = 0.0;
  std::array<double, 3> shift_voxels{0.0, 0.0, 0.0};

  bool is_identity() const {
    return rotation_deg == 0.0 && shift_voxels[0] == 0.0 &&
           shift_voxels[1] == 0.0 && shift_voxels[2] == 0.0;
  }
  bool operator==(const RigidParams&) const = default;
};

/// Row-major 3x4 matrix mapping output voxel coordinates to input voxel
/// coordinates (the inverse of the geometric transform being applied).
struct VoxelAffine {
  std::array<double, 12> m{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0};

  static VoxelAffine identity() { return {}; }
  std::array<double, 3> apply(double x, double y, double z) const {
    return {m[0] * x + m[1] * y + m[2] * z + m[3],
            m[4] * x + m[5] * y + m[6] * z + m[7],
            m[8] * x + m[9] * y + m[10] * z + m[11]};
  }
};

/// Continuous voxel-space center of the grid, ((nx-1)/2, (ny-1)/2, (nz-1)/2).
std::array<double, 3> volume_center(const Volume3& vol);

/// Inverse map of `params` (rotation about the volume center, then shift).
VoxelAffine rigid_inverse_map(const Volume3& vol, const RigidParams& params);

/// Inverse map of a rotation (degrees, z axis) plus isotropic scale about
/// the volume center. Used by affine augmentation.
VoxelAffine rotation_scale_inverse_map(const Volume3& vol, double rotation_deg,
                                       double scale);

/// Samples the input at out_to_in(output voxel) for every output voxel.
/// Out-of-bounds reads produce pad_value; dims/spacing/kind are preserved.
Volume3 resample(const Volume3& vol, const VoxelAffine& out_to_in,
                 Interp interp, double pad_value);

/// Rotation about the volume center followed by translation. Identity params
/// return the input bitwise for both interpolation modes.
Volume3 apply_rigid(const Volume3& vol, const RigidParams& params,
                    Interp interp, double pad_value);

}  // namespace petct

#endif  // PETCT_RESAMPLE_HPP
