#ifndef PETCT_POSTPROCESS_HPP
#define PETCT_POSTPROCESS_HPP

#include "petct/volume.hpp"

namespace petct {

/// Zeroes predicted voxels where the PET uptake is below the threshold
/// (strictly lower; voxels at exactly the threshold are kept). The output
/// foreground is always a subset of the input foreground.
Volume3 suv_mask(const Volume3& pred, const Volume3& pet, double threshold = 1.0);

}  // namespace petct

#endif  // PETCT_POSTPROCESS_HPP
