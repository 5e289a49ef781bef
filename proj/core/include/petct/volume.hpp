#ifndef PETCT_VOLUME_HPP
#define PETCT_VOLUME_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace petct {

/// Semantic interpretation of the voxel values.
enum class VolumeKind : std::uint8_t {
  kHU,      // CT intensities in Hounsfield units
  kSUV,     // PET standardized uptake values
  kBinary,  // segmentation mask, values in {0, 1}
  kProb,    // probability map, values in [0, 1]
};

std::string to_string(VolumeKind kind);
VolumeKind volume_kind_from_string(const std::string& name);

/// Out-of-field fill value that is physically plausible for the kind
/// (-1000 HU == air for CT, 0 otherwise).
double default_pad_value(VolumeKind kind);

/// A 3D scalar grid with spacing/origin metadata. Data is stored as a flat
/// array in x-fastest order: index = x + nx*(y + ny*z).
struct Volume3 {
  std::array<int, 3> dims{0, 0, 0};          // voxel counts (nx, ny, nz)
  std::array<double, 3> spacing{1.0, 1.0, 1.0};  // mm per voxel
  std::array<double, 3> origin{0.0, 0.0, 0.0};   // mm
  VolumeKind kind = VolumeKind::kHU;
  std::vector<double> data;

  Volume3() = default;
  Volume3(std::array<int, 3> d, std::array<double, 3> sp, VolumeKind k,
          double fill = 0.0)
      : dims(d), spacing(sp), kind(k),
        data(static_cast<std::size_t>(d[0]) * d[1] * d[2], fill) {}

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
  }
  double& at(int x, int y, int z) { return data[index(x, y, z)]; }
  double at(int x, int y, int z) const { return data[index(x, y, z)]; }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 && z < dims[2];
  }
  bool same_grid(const Volume3& other) const {
    return dims == other.dims && spacing == other.spacing;
  }

  /// Throws std::invalid_argument when a structural invariant is violated
  /// (size mismatch, non-positive spacing, kind/value contract).
  void validate() const;

  bool operator==(const Volume3&) const = default;
};

/// Exact comparison of the raw voxel buffers plus grid metadata; unlike
/// operator== this distinguishes -0.0 from 0.0 and treats NaNs as equal
/// to themselves.
bool bitwise_equal(const Volume3& a, const Volume3& b);

/// Axis subset for mirroring and mirror-based test-time augmentation.
struct MirrorAxes {
  bool x = false;
  bool y = false;
  bool z = false;

  bool any() const { return x || y || z; }
  bool operator==(const MirrorAxes&) const = default;
};

std::string to_string(const MirrorAxes& axes);

/// Flips the volume along every axis named in `axes`; dims/spacing unchanged.
Volume3 mirror(const Volume3& vol, const MirrorAxes& axes);

/// voxel_count * sx*sy*sz / 1000 (mm^3 -> mL).
double volume_ml(std::size_t voxel_count, const std::array<double, 3>& spacing);

}  // namespace petct

#endif  // PETCT_VOLUME_HPP
