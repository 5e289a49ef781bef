#include "petct/volume.hpp"

#include <cstring>
#include <stdexcept>

namespace petct {

std::string to_string(VolumeKind kind) {
  switch (kind) {
    case VolumeKind::kHU: return "HU";
    case VolumeKind::kSUV: return "SUV";
    case VolumeKind::kBinary: return "BINARY";
    case VolumeKind::kProb: return "PROB";
  }
  return "UNKNOWN";
}

VolumeKind volume_kind_from_string(const std::string& name) {
  if (name == "HU") return VolumeKind::kHU;
  if (name == "SUV") return VolumeKind::kSUV;
  if (name == "BINARY") return VolumeKind::kBinary;
  if (name == "PROB") return VolumeKind::kProb;
  throw std::invalid_argument("unknown volume kind: " + name);
}

double default_pad_value(VolumeKind kind) {
  return kind == VolumeKind::kHU ? -1000.0 : 0.0;
}

void Volume3::validate() const {
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
    throw std::invalid_argument("Volume3: all dims must be positive");
  }
  if (data.size() != voxel_count()) {
    throw std::invalid_argument("Volume3: data length does not match dims");
  }
  for (double s : spacing) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("Volume3: spacing components must be > 0");
    }
  }
  if (kind == VolumeKind::kBinary) {
    for (double v : data) {
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("Volume3: BINARY values must be 0 or 1");
      }
    }
  } else if (kind == VolumeKind::kProb) {
    for (double v : data) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("Volume3: PROB values must be in [0, 1]");
      }
    }
  }
}

bool bitwise_equal(const Volume3& a, const Volume3& b) {
  if (a.dims != b.dims || a.spacing != b.spacing || a.origin != b.origin ||
      a.kind != b.kind || a.data.size() != b.data.size()) {
    return false;
  }
  if (a.data.empty()) return true;
  return std::memcmp(a.data.data(), b.data.data(),
                     a.data.size() * sizeof(double)) == 0;
}

std::string to_string(const MirrorAxes& axes) {
  std::string s;
  if (axes.x) s += 'x';
  if (axes.y) s += 'y';
  if (axes.z) s += 'z';
  return s.empty() ? "identity" : s;
}

Volume3 mirror(const Volume3& vol, const MirrorAxes& axes) {
  if (!axes.any()) return vol;
  Volume3 out = vol;
  const auto [nx, ny, nz] = vol.dims;
  for (int z = 0; z < nz; ++z) {
    const int sz = axes.z ? nz - 1 - z : z;
    for (int y = 0; y < ny; ++y) {
      const int sy = axes.y ? ny - 1 - y : y;
      for (int x = 0; x < nx; ++x) {
        const int sx = axes.x ? nx - 1 - x : x;
        out.data[out.index(x, y, z)] = vol.data[vol.index(sx, sy, sz)];
      }
    }
  }
  return out;
}

double volume_ml(std::size_t voxel_count, const std::array<double, 3>& spacing) {
  return static_cast<double>(voxel_count) * spacing[0] * spacing[1] *
         spacing[2] / 1000.0;
}

}  // namespace petct
