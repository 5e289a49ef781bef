#include "petct/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <vector>

namespace petct {

namespace {

// NIfTI-1 header, 348 bytes (https://nifti.nimh.nih.gov/nifti-1).
struct NiftiHeader {
  std::int32_t sizeof_hdr;
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};
static_assert(sizeof(NiftiHeader) == 348, "NIfTI-1 header must be 348 bytes");

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtInt32 = 8;
constexpr std::int16_t kDtFloat32 = 16;
constexpr std::int16_t kDtFloat64 = 64;
constexpr std::int16_t kDtInt8 = 256;
constexpr std::int16_t kDtUint16 = 512;
constexpr std::int16_t kDtUint32 = 768;

int bytes_per_voxel(std::int16_t datatype) {
  switch (datatype) {
    case kDtUint8:
    case kDtInt8: return 1;
    case kDtInt16:
    case kDtUint16: return 2;
    case kDtInt32:
    case kDtUint32:
    case kDtFloat32: return 4;
    case kDtFloat64: return 8;
    default: return 0;
  }
}

template <typename T>
void swap_bytes(T& value) {
  auto bytes = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
  std::reverse(bytes.begin(), bytes.end());
  value = std::bit_cast<T>(bytes);
}

void swap_header(NiftiHeader& h) {
  swap_bytes(h.sizeof_hdr);
  swap_bytes(h.extents);
  swap_bytes(h.session_error);
  for (auto& v : h.dim) swap_bytes(v);
  swap_bytes(h.intent_p1);
  swap_bytes(h.intent_p2);
  swap_bytes(h.intent_p3);
  swap_bytes(h.intent_code);
  swap_bytes(h.datatype);
  swap_bytes(h.bitpix);
  swap_bytes(h.slice_start);
  for (auto& v : h.pixdim) swap_bytes(v);
  swap_bytes(h.vox_offset);
  swap_bytes(h.scl_slope);
  swap_bytes(h.scl_inter);
  swap_bytes(h.slice_end);
  swap_bytes(h.cal_max);
  swap_bytes(h.cal_min);
  swap_bytes(h.slice_duration);
  swap_bytes(h.toffset);
  swap_bytes(h.glmax);
  swap_bytes(h.glmin);
  swap_bytes(h.qform_code);
  swap_bytes(h.sform_code);
  swap_bytes(h.quatern_b);
  swap_bytes(h.quatern_c);
  swap_bytes(h.quatern_d);
  swap_bytes(h.qoffset_x);
  swap_bytes(h.qoffset_y);
  swap_bytes(h.qoffset_z);
  for (auto& v : h.srow_x) swap_bytes(v);
  for (auto& v : h.srow_y) swap_bytes(v);
  for (auto& v : h.srow_z) swap_bytes(v);
}

class GzFile {
 public:
  GzFile(const std::filesystem::path& path, const char* mode)
      : file_(gzopen(path.string().c_str(), mode)) {}
  ~GzFile() {
    if (file_) gzclose(file_);
  }
  GzFile(const GzFile&) = delete;
  GzFile& operator=(const GzFile&) = delete;

  bool ok() const { return file_ != nullptr; }

  void read_exact(void* dst, std::size_t n, const char* what) {
    auto* p = static_cast<unsigned char*>(dst);
    while (n > 0) {
      const unsigned chunk =
          static_cast<unsigned>(std::min<std::size_t>(n, 1u << 30));
      const int got = gzread(file_, p, chunk);
      if (got <= 0) throw NiftiError(std::string("malformed NIfTI: truncated ") + what);
      p += got;
      n -= static_cast<std::size_t>(got);
    }
  }

  void write_exact(const void* src, std::size_t n) {
    auto* p = static_cast<const unsigned char*>(src);
    while (n > 0) {
      const unsigned chunk =
          static_cast<unsigned>(std::min<std::size_t>(n, 1u << 30));
      const int wrote = gzwrite(file_, p, chunk);
      if (wrote <= 0) throw NiftiError("NIfTI write failed");
      p += wrote;
      n -= static_cast<std::size_t>(wrote);
    }
  }

 private:
  gzFile file_;
};

bool ends_with_gz(const std::filesystem::path& path) {
  const auto s = path.string();
  return s.size() >= 3 && s.compare(s.size() - 3, 3, ".gz") == 0;
}

// True when the 3x3 part is diagonal up to sign (no rotation/permutation).
bool is_axis_aligned(const std::array<std::array<double, 3>, 3>& r) {
  double scale = 0.0;
  for (const auto& row : r)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tol = 1e-3 * scale;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && std::abs(r[i][j]) > tol) return false;
      if (i == j && std::abs(r[i][j]) <= tol) return false;
    }
  }
  return true;
}

std::array<std::array<double, 3>, 3> quaternion_rotation(const NiftiHeader& h) {
  const double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
  const double a2 = std::max(0.0, 1.0 - b * b - c * c - d * d);
  const double a = std::sqrt(a2);
  const double qfac = h.pixdim[0] < 0.0f ? -1.0 : 1.0;
  return {{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d),
            qfac * 2 * (b * d + a * c)},
           {2 * (b * c + a * d), a * a + c * c - b * b - d * d,
            qfac * 2 * (c * d - a * b)},
           {2 * (b * d - a * c), 2 * (c * d + a * b),
            qfac * (a * a + d * d - b * b - c * c)}}};
}

void check_orientation(const NiftiHeader& h) {
  if (h.sform_code > 0) {
    const std::array<std::array<double, 3>, 3> r = {
        {{h.srow_x[0], h.srow_x[1], h.srow_x[2]},
         {h.srow_y[0], h.srow_y[1], h.srow_y[2]},
         {h.srow_z[0], h.srow_z[1], h.srow_z[2]}}};
    if (!is_axis_aligned(r)) {
      throw NiftiError(
          "NIfTI affine is not axis-aligned up to sign; "
          "reorient the image externally before loading");
    }
    return;
  }
  if (h.qform_code > 0 && !is_axis_aligned(quaternion_rotation(h))) {
    throw NiftiError(
        "NIfTI affine is not axis-aligned up to sign; "
        "reorient the image externally before loading");
  }
}

template <typename T>
void convert_voxels(const std::vector<unsigned char>& raw, bool swapped,
                    std::vector<double>& out) {
  const auto n = out.size();
  const T* src = reinterpret_cast<const T*>(raw.data());
  for (std::size_t i = 0; i < n; ++i) {
    T v;
    std::memcpy(&v, src + i, sizeof(T));
    if (swapped && sizeof(T) > 1) swap_bytes(v);
    out[i] = static_cast<double>(v);
  }
}

}  // namespace

Volume3 load_nifti(const std::filesystem::path& path, VolumeKind kind) {
  GzFile file(path, "rb");
  if (!file.ok()) {
    throw NiftiError("cannot open NIfTI file: " + path.string());
  }

  NiftiHeader h{};
  file.read_exact(&h, sizeof(h), "header");

  bool swapped = false;
  if (h.sizeof_hdr != 348) {
    swap_header(h);
    swapped = true;
    if (h.sizeof_hdr != 348) {
      throw NiftiError("malformed NIfTI header: bad sizeof_hdr in " + path.string());
    }
  }
  if (std::strncmp(h.magic, "n+1", 4) != 0) {
    if (std::strncmp(h.magic, "ni1", 4) == 0) {
      throw NiftiError("two-file NIfTI (.hdr/.img) is not supported: " + path.string());
    }
    throw NiftiError("malformed NIfTI header: bad magic in " + path.string());
  }

  if (h.dim[0] < 3) {
    throw NiftiError("unsupported dimensionality: expected a 3D volume, got dim[0]=" +
                     std::to_string(h.dim[0]));
  }
  for (int i = 4; i <= h.dim[0] && i < 8; ++i) {
    if (h.dim[i] > 1) {
      throw NiftiError("unsupported dimensionality: non-trivial dimension " +
                       std::to_string(i));
    }
  }

  const int bpv = bytes_per_voxel(h.datatype);
  if (bpv == 0) {
    throw NiftiError("unsupported datatype code " + std::to_string(h.datatype));
  }

  Volume3 vol;
  vol.kind = kind;
  for (int i = 0; i < 3; ++i) {
    const int n = h.dim[i + 1];
    const double sp = h.pixdim[i + 1];
    if (n <= 0) throw NiftiError("malformed NIfTI header: non-positive dim");
    if (!(sp > 0.0)) throw NiftiError("malformed NIfTI header: non-positive pixdim");
    vol.dims[i] = n;
    vol.spacing[i] = sp;
  }
  if (h.sform_code > 0) {
    vol.origin = {h.srow_x[3], h.srow_y[3], h.srow_z[3]};
  } else if (h.qform_code > 0) {
    vol.origin = {h.qoffset_x, h.qoffset_y, h.qoffset_z};
  }

  check_orientation(h);

  // Skip any header extensions between byte 348 and the data offset.
  const auto offset = static_cast<long>(h.vox_offset);
  if (offset < 348) throw NiftiError("malformed NIfTI header: vox_offset < 348");
  std::vector<unsigned char> skip(static_cast<std::size_t>(offset) - 348);
  if (!skip.empty()) file.read_exact(skip.data(), skip.size(), "extension block");

  std::vector<unsigned char> raw(vol.voxel_count() * static_cast<std::size_t>(bpv));
  file.read_exact(raw.data(), raw.size(), "voxel data");

  vol.data.resize(vol.voxel_count());
  switch (h.datatype) {
    case kDtUint8: convert_voxels<std::uint8_t>(raw, swapped, vol.data); break;
    case kDtInt8: convert_voxels<std::int8_t>(raw, swapped, vol.data); break;
    case kDtInt16: convert_voxels<std::int16_t>(raw, swapped, vol.data); break;
    case kDtUint16: convert_voxels<std::uint16_t>(raw, swapped, vol.data); break;
    case kDtInt32: convert_voxels<std::int32_t>(raw, swapped, vol.data); break;
    case kDtUint32: convert_voxels<std::uint32_t>(raw, swapped, vol.data); break;
    case kDtFloat32: convert_voxels<float>(raw, swapped, vol.data); break;
    case kDtFloat64: convert_voxels<double>(raw, swapped, vol.data); break;
  }

  // scl_slope == 0 means "no scaling" by convention.
  if (h.scl_slope != 0.0f && (h.scl_slope != 1.0f || h.scl_inter != 0.0f)) {
    for (double& v : vol.data) v = v * h.scl_slope + h.scl_inter;
  }

  vol.validate();
  return vol;
}

void save_nifti(const Volume3& vol, const std::filesystem::path& path) {
  vol.validate();

  NiftiHeader h{};
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = 3;
  for (int i = 0; i < 3; ++i) {
    h.dim[i + 1] = static_cast<std::int16_t>(vol.dims[i]);
    h.pixdim[i + 1] = static_cast<float>(vol.spacing[i]);
  }
  for (int i = 4; i < 8; ++i) h.dim[i] = 1;
  h.pixdim[0] = 1.0f;

  const bool binary = vol.kind == VolumeKind::kBinary;
  h.datatype = binary ? kDtUint8 : kDtFloat64;
  h.bitpix = binary ? 8 : 64;
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 2;  // NIFTI_UNITS_MM

  h.qform_code = 0;
  h.sform_code = 1;
  h.srow_x[0] = static_cast<float>(vol.spacing[0]);
  h.srow_y[1] = static_cast<float>(vol.spacing[1]);
  h.srow_z[2] = static_cast<float>(vol.spacing[2]);
  h.srow_x[3] = static_cast<float>(vol.origin[0]);
  h.srow_y[3] = static_cast<float>(vol.origin[1]);
  h.srow_z[3] = static_cast<float>(vol.origin[2]);

  std::snprintf(h.descrip, sizeof(h.descrip), "petct-datakit %s", to_string(vol.kind).c_str());
  std::memcpy(h.magic, "n+1", 4);

  // "T" writes without compression, so one code path serves .nii and .nii.gz.
  GzFile file(path, ends_with_gz(path) ? "wb" : "wbT");
  if (!file.ok()) {
    throw NiftiError("cannot open NIfTI file for writing: " + path.string());
  }
  file.write_exact(&h, sizeof(h));
  const std::array<unsigned char, 4> no_extension{0, 0, 0, 0};
  file.write_exact(no_extension.data(), no_extension.size());

  if (binary) {
    std::vector<std::uint8_t> raw(vol.data.size());
    std::transform(vol.data.begin(), vol.data.end(), raw.begin(),
                   [](double v) { return static_cast<std::uint8_t>(v); });
    file.write_exact(raw.data(), raw.size());
  } else {
    file.write_exact(vol.data.data(), vol.data.size() * sizeof(double));
  }
}

}  // namespace petct
