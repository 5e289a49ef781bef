// Independent reference implementations used to check the library. These
// deliberately share no code with petct_core: components use iterative
// min-label propagation instead of flood fill, metrics use direct voxel
// loops, and rigid shifts use index arithmetic.
#ifndef PETCT_TESTS_ORACLES_HPP
#define PETCT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "petct/volume.hpp"

namespace petct::testing {

struct OracleComponents {
  std::vector<std::int64_t> labels;  // 0 background, components numbered from 1
  int count = 0;
  std::vector<std::size_t> voxel_counts;
};

// Min-label relaxation: every foreground voxel starts with its own id and
// repeatedly takes the minimum over its neighborhood until a fixed point.
inline OracleComponents oracle_components(const Volume3& vol, int connectivity) {
  const auto [nx, ny, nz] = vol.dims;
  const auto n = vol.voxel_count();
  const int max_l1 = connectivity == 6 ? 1 : connectivity == 18 ? 2 : 3;

  std::vector<std::int64_t> ids(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (vol.data[i] != 0.0) ids[i] = static_cast<std::int64_t>(i);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (int z = 0; z < nz; ++z) {
      for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
          const std::size_t i = vol.index(x, y, z);
          if (ids[i] < 0) continue;
          for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                const int l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (l1 < 1 || l1 > max_l1) continue;
                const int qx = x + dx, qy = y + dy, qz = z + dz;
                if (!vol.in_bounds(qx, qy, qz)) continue;
                const std::size_t q = vol.index(qx, qy, qz);
                if (ids[q] >= 0 && ids[q] < ids[i]) {
                  ids[i] = ids[q];
                  changed = true;
                }
              }
            }
          }
        }
      }
    }
  }

  OracleComponents out;
  out.labels.assign(n, 0);
  std::map<std::int64_t, std::int64_t> remap;  // root id -> compact label
  for (std::size_t i = 0; i < n; ++i) {
    if (ids[i] < 0) continue;
    auto [it, inserted] = remap.try_emplace(ids[i], static_cast<std::int64_t>(remap.size() + 1));
    out.labels[i] = it->second;
  }
  out.count = static_cast<int>(remap.size());
  out.voxel_counts.assign(static_cast<std::size_t>(out.count), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] > 0) ++out.voxel_counts[static_cast<std::size_t>(out.labels[i]) - 1];
  }
  return out;
}

inline double oracle_dice(const Volume3& pred, const Volume3& gt) {
  std::size_t p = 0, g = 0, both = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (pred.data[i] != 0.0) ++p;
    if (gt.data[i] != 0.0) ++g;
    if (pred.data[i] != 0.0 && gt.data[i] != 0.0) ++both;
  }
  return p + g == 0 ? 1.0 : 2.0 * static_cast<double>(both) / static_cast<double>(p + g);
}

// mL of `source` components (per oracle_components) with no voxel in `other`.
inline double oracle_unmatched_ml(const Volume3& source, const Volume3& other,
                                  int connectivity) {
  const OracleComponents comps = oracle_components(source, connectivity);
  std::set<std::int64_t> overlapped;
  for (std::size_t i = 0; i < source.data.size(); ++i) {
    if (comps.labels[i] > 0 && other.data[i] != 0.0) overlapped.insert(comps.labels[i]);
  }
  std::size_t voxels = 0;
  for (std::int64_t label = 1; label <= comps.count; ++label) {
    if (!overlapped.contains(label)) {
      voxels += comps.voxel_counts[static_cast<std::size_t>(label) - 1];
    }
  }
  return static_cast<double>(voxels) * source.spacing[0] * source.spacing[1] *
         source.spacing[2] / 1000.0;
}

// Expected result of an integer-voxel shift with NEAREST sampling.
inline Volume3 oracle_index_shift(const Volume3& vol, int dx, int dy, int dz,
                                  double pad) {
  Volume3 out = vol;
  const auto [nx, ny, nz] = vol.dims;
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const int sx = x - dx, sy = y - dy, sz = z - dz;
        out.data[out.index(x, y, z)] =
            vol.in_bounds(sx, sy, sz) ? vol.at(sx, sy, sz) : pad;
      }
    }
  }
  return out;
}

}  // namespace petct::testing

#endif  // PETCT_TESTS_ORACLES_HPP
