#ifndef PETCT_MISALIGN_HPP
#define PETCT_MISALIGN_HPP

#include "petct/case.hpp"
#include "petct/resample.hpp"
#include "petct/rng.hpp"

namespace petct {

/// Misalignment augmentation: a small rigid perturbation applied to the CT
/// only, simulating inter-modality registration error. PET and ground truth
/// stay untouched.
struct MisalignConfig {
  double max_rotation_deg = 5.0;
  std::array<double, 3> max_shift_voxels{2.0, 2.0, 0.0};
  double p_rotation = 0.1;
  double p_translation = 0.1;
  Interp interp = Interp::kTrilinear;
  double ct_pad_hu = -1000.0;

  void validate() const;
  bool operator==(const MisalignConfig&) const = default;
};

/// Draws rigid parameters: with p_rotation a rotation uniform in
/// [-max_rotation_deg, +max_rotation_deg], else 0; independently with
/// p_translation per-component shifts uniform in [-max_shift, +max_shift],
/// else zero.
RigidParams sample_misalignment(const MisalignConfig& cfg, RngStream& rng);

/// Displaces only the CT (rotation about the volume center first, then
/// translation); PET and label are returned bitwise unchanged.
PetCtCase apply_misalignment(const PetCtCase& input, const RigidParams& params,
                             const MisalignConfig& cfg);

}  // namespace petct

#endif  // PETCT_MISALIGN_HPP
