#include "petct/components.hpp"

#include <array>
#include <stdexcept>

namespace petct {

namespace {

struct Offset {
  int dx, dy, dz;
};

std::vector<Offset> neighborhood(Connectivity conn) {
  const int max_l1 = conn == Connectivity::k6 ? 1 : conn == Connectivity::k18 ? 2 : 3;
  std::vector<Offset> offsets;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (l1 >= 1 && l1 <= max_l1) offsets.push_back({dx, dy, dz});
      }
    }
  }
  return offsets;
}

}  // namespace

Connectivity connectivity_from_int(int value) {
  switch (value) {
    case 6: return Connectivity::k6;
    case 18: return Connectivity::k18;
    case 26: return Connectivity::k26;
    default: throw std::invalid_argument("connectivity must be 6, 18 or 26");
  }
}

ComponentLabeling connected_components(const Volume3& vol, Connectivity conn) {
  if (vol.kind != VolumeKind::kBinary) {
    throw std::invalid_argument("connected_components: volume kind must be BINARY");
  }
  const auto offsets = neighborhood(conn);
  const auto [nx, ny, nz] = vol.dims;

  ComponentLabeling out;
  out.labels.assign(vol.voxel_count(), 0);

  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < vol.data.size(); ++seed) {
    if (vol.data[seed] == 0.0 || out.labels[seed] != 0) continue;
    const std::int32_t label = ++out.component_count;
    std::size_t count = 0;
    stack.assign(1, seed);
    out.labels[seed] = label;
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      ++count;
      const int x = static_cast<int>(idx % nx);
      const int y = static_cast<int>((idx / nx) % ny);
      const int z = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
      for (const auto& o : offsets) {
        const int qx = x + o.dx, qy = y + o.dy, qz = z + o.dz;
        if (qx < 0 || qx >= nx || qy < 0 || qy >= ny || qz < 0 || qz >= nz) continue;
        const std::size_t q = vol.index(qx, qy, qz);
        if (vol.data[q] != 0.0 && out.labels[q] == 0) {
          out.labels[q] = label;
          stack.push_back(q);
        }
      }
    }
    out.component_voxel_counts.push_back(count);
  }
  return out;
}

}  // namespace petct
