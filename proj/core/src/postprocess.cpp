#include "petct/postprocess.hpp"

#include <stdexcept>

namespace petct {

Volume3 suv_mask(const Volume3& pred, const Volume3& pet, double threshold) {
  if (pred.kind != VolumeKind::kBinary) {
    throw std::invalid_argument("suv_mask: prediction kind must be BINARY");
  }
  if (!pred.same_grid(pet)) {
    throw std::invalid_argument("suv_mask: prediction and PET grids differ");
  }
  Volume3 out = pred;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    if (pet.data[i] < threshold) out.data[i] = 0.0;
  }
  return out;
}

}  // namespace petct
