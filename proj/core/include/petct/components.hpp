#ifndef PETCT_COMPONENTS_HPP
#define PETCT_COMPONENTS_HPP

#include <cstdint>
#include <vector>

#include "petct/volume.hpp"

namespace petct {

enum class Connectivity : int { k6 = 6, k18 = 18, k26 = 26 };

Connectivity connectivity_from_int(int value);

/// Labeling of the foreground of a binary volume. Label 0 is background;
/// components are numbered 1..component_count in ascending order of their
/// first voxel's linear index.
struct ComponentLabeling {
  std::vector<std::int32_t> labels;
  int component_count = 0;
  std::vector<std::size_t> component_voxel_counts;  // indexed by label-1

  std::size_t count_of(std::int32_t label) const {
    return component_voxel_counts[static_cast<std::size_t>(label) - 1];
  }
};

/// Flood-fill labeling of the 1-voxels under the chosen neighborhood.
/// Throws std::invalid_argument unless vol.kind == BINARY.
ComponentLabeling connected_components(const Volume3& vol, Connectivity conn);

}  // namespace petct

#endif  // PETCT_COMPONENTS_HPP
