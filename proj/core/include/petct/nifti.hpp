#ifndef PETCT_NIFTI_HPP
#define PETCT_NIFTI_HPP

#include <filesystem>
#include <stdexcept>

#include "petct/volume.hpp"

namespace petct {

class NiftiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a NIfTI-1 volume (.nii or .nii.gz). The caller names the semantic
/// kind; voxel data is converted to double with scl_slope/scl_inter applied.
/// Headers whose qform/sform affine is not axis-aligned up to sign are
/// rejected rather than silently reoriented, because reorientation would
/// break the CT/PET/label co-registration contract.
Volume3 load_nifti(const std::filesystem::path& path, VolumeKind kind);

/// Writes a NIfTI-1 file with identity orientation scaled by the spacing.
/// BINARY volumes are stored as uint8, everything else as float64, so a
/// save/load round trip is bit-exact on the data. Output is gzip-compressed
/// when the path ends in .gz.
void save_nifti(const Volume3& vol, const std::filesystem::path& path);

}  // namespace petct

#endif  // PETCT_NIFTI_HPP
