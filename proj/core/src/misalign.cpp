#include "petct/misalign.hpp"

#include <stdexcept>

namespace petct {

void MisalignConfig::validate() const {
  if (max_rotation_deg < 0.0) {
    throw std::invalid_argument("MisalignConfig: max_rotation_deg must be >= 0");
  }
  for (double s : max_shift_voxels) {
    if (s < 0.0) {
      throw std::invalid_argument("MisalignConfig: max_shift components must be >= 0");
    }
  }
  if (p_rotation < 0.0 || p_rotation > 1.0 || p_translation < 0.0 ||
      p_translation > 1.0) {
    throw std::invalid_argument("MisalignConfig: probabilities must be in [0, 1]");
  }
}

RigidParams sample_misalignment(const MisalignConfig& cfg, RngStream& rng) {
  cfg.validate();
  RigidParams params;
  if (rng.bernoulli(cfg.p_rotation)) {
    params.rotation_deg = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg);
  }
  if (rng.bernoulli(cfg.p_translation)) {
    for (int i = 0; i < 3; ++i) {
      const double m = cfg.max_shift_voxels[i];
      params.shift_voxels[i] = m == 0.0 ? 0.0 : rng.uniform(-m, m);
    }
  }
  return params;
}

PetCtCase apply_misalignment(const PetCtCase& input, const RigidParams& params,
                             const MisalignConfig& cfg) {
  PetCtCase out = input;
  out.ct = apply_rigid(input.ct, params, cfg.interp, cfg.ct_pad_hu);
  return out;
}

}  // namespace petct
