#include "petct/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace petct {

namespace {

// Substream indices for RngStream::derive.
constexpr std::uint64_t kCaseStream = 0;
constexpr std::uint64_t kCtStream = 1;
constexpr std::uint64_t kPetStream = 2;

double stddev(const Volume3& vol) {
  if (vol.data.empty()) return 0.0;
  const double n = static_cast<double>(vol.data.size());
  const double mean = std::accumulate(vol.data.begin(), vol.data.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : vol.data) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / n);
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

void blur_axis(const Volume3& in, Volume3& out, int axis, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const auto [nx, ny, nz] = in.dims;
  const std::array<int, 3> n{nx, ny, nz};
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        std::array<int, 3> p{x, y, z};
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          std::array<int, 3> q = p;
          q[axis] = reflect_index(p[axis] + k, n[axis]);
          acc += kernel[static_cast<std::size_t>(k + radius)] * in.at(q[0], q[1], q[2]);
        }
        out.at(x, y, z) = acc;
      }
    }
  }
}

TransformKind kind_of_params(const TransformParams& params) {
  return std::visit(
      [](const auto& p) -> TransformKind {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AffineParams>) return TransformKind::kAffine;
        else if constexpr (std::is_same_v<T, GaussianNoiseParams>) return TransformKind::kGaussianNoise;
        else if constexpr (std::is_same_v<T, GaussianBlurParams>) return TransformKind::kGaussianBlur;
        else if constexpr (std::is_same_v<T, BrightnessParams>) return TransformKind::kBrightness;
        else if constexpr (std::is_same_v<T, GammaParams>) return TransformKind::kGamma;
        else if constexpr (std::is_same_v<T, MirrorParams>) return TransformKind::kMirror;
        else return TransformKind::kMisalign;
      },
      params);
}

void check_range(const ParamRange& r, const char* what) {
  if (!(r.lo <= r.hi)) {
    throw std::invalid_argument(std::string("TransformSpec: ") + what + " range has lo > hi");
  }
}

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAffine: return "AFFINE";
    case TransformKind::kGaussianNoise: return "GAUSSIAN_NOISE";
    case TransformKind::kGaussianBlur: return "GAUSSIAN_BLUR";
    case TransformKind::kBrightness: return "BRIGHTNESS";
    case TransformKind::kGamma: return "GAMMA";
    case TransformKind::kGammaInverted: return "GAMMA_INVERTED";
    case TransformKind::kMirror: return "MIRROR";
    case TransformKind::kMisalign: return "MISALIGN";
  }
  return "UNKNOWN";
}

TransformKind transform_kind_from_string(const std::string& name) {
  if (name == "AFFINE") return TransformKind::kAffine;
  if (name == "GAUSSIAN_NOISE") return TransformKind::kGaussianNoise;
  if (name == "GAUSSIAN_BLUR") return TransformKind::kGaussianBlur;
  if (name == "BRIGHTNESS") return TransformKind::kBrightness;
  if (name == "GAMMA") return TransformKind::kGamma;
  if (name == "GAMMA_INVERTED") return TransformKind::kGammaInverted;
  if (name == "MIRROR") return TransformKind::kMirror;
  if (name == "MISALIGN") return TransformKind::kMisalign;
  throw std::invalid_argument("unknown transform kind: " + name);
}

void TransformSpec::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("TransformSpec: probability must be in [0, 1]");
  }
  const TransformKind expected = kind_of_params(params);
  const bool gamma_pair = kind == TransformKind::kGammaInverted &&
                          expected == TransformKind::kGamma;
  if (kind != expected && !gamma_pair) {
    throw std::invalid_argument("TransformSpec: params do not match kind " + to_string(kind));
  }
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AffineParams>) {
          check_range(p.rotation_deg, "rotation_deg");
          check_range(p.scale, "scale");
          if (!(p.scale.lo > 0.0)) {
            throw std::invalid_argument("TransformSpec: scale must be positive");
          }
        } else if constexpr (std::is_same_v<T, GaussianNoiseParams>) {
          check_range(p.sigma_rel, "sigma");
        } else if constexpr (std::is_same_v<T, GaussianBlurParams>) {
          check_range(p.sigma_vox, "sigma");
        } else if constexpr (std::is_same_v<T, BrightnessParams>) {
          check_range(p.multiplier, "multiplier");
        } else if constexpr (std::is_same_v<T, GammaParams>) {
          check_range(p.gamma, "gamma");
          if (!(p.gamma.lo > 0.0)) {
            throw std::invalid_argument("TransformSpec: gamma must be positive");
          }
        } else if constexpr (std::is_same_v<T, MirrorParams>) {
          if (!(p.axis_probability >= 0.0 && p.axis_probability <= 1.0)) {
            throw std::invalid_argument("TransformSpec: axis probability must be in [0, 1]");
          }
        } else {
          p.validate();
        }
      },
      params);
}

bool AugmentScheme::contains(TransformKind kind) const {
  return find(kind) != nullptr;
}

const TransformSpec* AugmentScheme::find(TransformKind kind) const {
  for (const auto& t : transforms) {
    if (t.kind == kind) return &t;
  }
  return nullptr;
}

void AugmentScheme::validate() const {
  for (const auto& t : transforms) t.validate();
}

AugmentScheme baseline_scheme() {
  AugmentScheme scheme;
  scheme.name = "baseline";
  scheme.transforms = {
      {TransformKind::kAffine, 0.2, AffineParams{}},
      {TransformKind::kGaussianNoise, 0.1, GaussianNoiseParams{}},
      {TransformKind::kGaussianBlur, 0.2, GaussianBlurParams{}},
      {TransformKind::kBrightness, 0.15, BrightnessParams{}},
      {TransformKind::kGammaInverted, 0.1, GammaParams{}},
      {TransformKind::kGamma, 0.1, GammaParams{}},
      {TransformKind::kMirror, 1.0, MirrorParams{}},
  };
  return scheme;
}

AugmentScheme subtle_scheme() {
  AugmentScheme scheme = baseline_scheme();
  scheme.name = "subtle";
  std::erase_if(scheme.transforms, [](const TransformSpec& t) {
    return t.kind == TransformKind::kGaussianBlur ||
           t.kind == TransformKind::kGammaInverted;
  });
  for (auto& t : scheme.transforms) {
    if (t.kind == TransformKind::kAffine) {
      auto& affine = std::get<AffineParams>(t.params);
      affine.rotation_deg = {-15.0, 15.0};
      affine.scale = {0.85, 1.15};
    }
  }
  return scheme;
}

AugmentScheme with_misalignment(const AugmentScheme& scheme,
                                const MisalignConfig& cfg) {
  if (scheme.contains(TransformKind::kMisalign)) {
    throw std::invalid_argument("with_misalignment: scheme already contains MISALIGN");
  }
  cfg.validate();
  AugmentScheme out = scheme;
  out.name = scheme.name + "+misal";
  out.transforms.insert(out.transforms.begin(),
                        TransformSpec{TransformKind::kMisalign, 1.0, cfg});
  return out;
}

double TransformRecord::value_of(const std::string& name) const {
  for (const auto& [key, value] : sampled) {
    if (key == name) return value;
  }
  throw std::out_of_range("TransformRecord: no sampled value named " + name);
}

Volume3 gamma_transform(const Volume3& vol, double gamma, bool inverted) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("gamma_transform: gamma must be > 0");
  }
  const auto [lo_it, hi_it] = std::minmax_element(vol.data.begin(), vol.data.end());
  if (vol.data.empty() || *lo_it == *hi_it) return vol;

  const double sign = inverted ? -1.0 : 1.0;
  const double lo = inverted ? -*hi_it : *lo_it;
  const double range = *hi_it - *lo_it;
  Volume3 out = vol;
  for (double& v : out.data) {
    const double normalized = (sign * v - lo) / range;
    v = sign * (std::pow(normalized, gamma) * range + lo);
  }
  return out;
}

Volume3 gaussian_noise(const Volume3& vol, double sigma, RngStream& rng) {
  if (sigma < 0.0) {
    throw std::invalid_argument("gaussian_noise: sigma must be >= 0");
  }
  if (sigma == 0.0) return vol;
  Volume3 out = vol;
  for (double& v : out.data) v += rng.normal(0.0, sigma);
  return out;
}

Volume3 gaussian_blur(const Volume3& vol, double sigma_vox) {
  if (sigma_vox <= 0.0) return vol;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_vox)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k / sigma_vox) * (k / sigma_vox));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  Volume3 a = vol;
  Volume3 b = vol;
  blur_axis(a, b, 0, kernel);
  blur_axis(b, a, 1, kernel);
  blur_axis(a, b, 2, kernel);
  return b;
}

namespace {

void record_range_sample(TransformRecord& rec, const std::string& prefix,
                         const std::string& name, double value) {
  rec.sampled.emplace_back(prefix.empty() ? name : prefix + "_" + name, value);
}

// Applies one intensity transform to ct and pet with independent substreams.
template <typename Fn>
void for_each_modality(PetCtCase& cs, std::uint64_t seed, std::uint64_t index,
                       TransformRecord& rec, Fn&& fn) {
  struct Slot {
    Volume3* vol;
    std::uint64_t substream;
    const char* name;
  };
  const std::array<Slot, 2> slots{{{&cs.ct, kCtStream, "ct"},
                                   {&cs.pet, kPetStream, "pet"}}};
  for (const auto& slot : slots) {
    RngStream rng = RngStream::derive(seed, cs.case_id, index, slot.substream);
    fn(*slot.vol, rng, rec, slot.name);
  }
}

}  // namespace

AugmentResult apply_scheme_traced(const PetCtCase& input,
                                  const AugmentScheme& scheme,
                                  std::uint64_t seed) {
  input.validate();
  scheme.validate();

  AugmentResult out{input, {}};
  PetCtCase& cs = out.result;

  for (std::size_t i = 0; i < scheme.transforms.size(); ++i) {
    const TransformSpec& spec = scheme.transforms[i];
    TransformRecord rec;
    rec.kind = spec.kind;

    RngStream rng = RngStream::derive(seed, cs.case_id, i, kCaseStream);
    rec.fired = rng.bernoulli(spec.probability);
    if (!rec.fired) {
      out.records.push_back(std::move(rec));
      continue;
    }

    switch (spec.kind) {
      case TransformKind::kAffine: {
        const auto& p = std::get<AffineParams>(spec.params);
        const double rotation = p.rotation_deg.sample(rng);
        const double scale = p.scale.sample(rng);
        record_range_sample(rec, "", "rotation_deg", rotation);
        record_range_sample(rec, "", "scale", scale);
        const auto map = rotation_scale_inverse_map(cs.ct, rotation, scale);
        cs.ct = resample(cs.ct, map, p.interp, default_pad_value(cs.ct.kind));
        cs.pet = resample(cs.pet, map, p.interp, default_pad_value(cs.pet.kind));
        if (cs.label) {
          cs.label = resample(*cs.label, map, Interp::kNearest,
                              default_pad_value(cs.label->kind));
        }
        break;
      }
      case TransformKind::kMirror: {
        const auto& p = std::get<MirrorParams>(spec.params);
        MirrorAxes axes;
        axes.x = rng.bernoulli(p.axis_probability);
        axes.y = rng.bernoulli(p.axis_probability);
        axes.z = rng.bernoulli(p.axis_probability);
        record_range_sample(rec, "", "axis_x", axes.x ? 1.0 : 0.0);
        record_range_sample(rec, "", "axis_y", axes.y ? 1.0 : 0.0);
        record_range_sample(rec, "", "axis_z", axes.z ? 1.0 : 0.0);
        if (axes.any()) {
          cs.ct = mirror(cs.ct, axes);
          cs.pet = mirror(cs.pet, axes);
          if (cs.label) cs.label = mirror(*cs.label, axes);
        }
        break;
      }
      case TransformKind::kMisalign: {
        const auto& cfg = std::get<MisalignConfig>(spec.params);
        const RigidParams rigid = sample_misalignment(cfg, rng);
        record_range_sample(rec, "", "rotation_deg", rigid.rotation_deg);
        record_range_sample(rec, "", "shift_x", rigid.shift_voxels[0]);
        record_range_sample(rec, "", "shift_y", rigid.shift_voxels[1]);
        record_range_sample(rec, "", "shift_z", rigid.shift_voxels[2]);
        cs = apply_misalignment(cs, rigid, cfg);
        break;
      }
      case TransformKind::kGaussianNoise: {
        const auto& p = std::get<GaussianNoiseParams>(spec.params);
        for_each_modality(cs, seed, i, rec,
                          [&p](Volume3& vol, RngStream& mrng, TransformRecord& r,
                               const char* name) {
                            const double frac = p.sigma_rel.sample(mrng);
                            const double sigma = frac * stddev(vol);
                            record_range_sample(r, name, "sigma", sigma);
                            vol = gaussian_noise(vol, sigma, mrng);
                          });
        break;
      }
      case TransformKind::kGaussianBlur: {
        const auto& p = std::get<GaussianBlurParams>(spec.params);
        for_each_modality(cs, seed, i, rec,
                          [&p](Volume3& vol, RngStream& mrng, TransformRecord& r,
                               const char* name) {
                            const double sigma = p.sigma_vox.sample(mrng);
                            record_range_sample(r, name, "sigma_vox", sigma);
                            vol = gaussian_blur(vol, sigma);
                          });
        break;
      }
      case TransformKind::kBrightness: {
        const auto& p = std::get<BrightnessParams>(spec.params);
        for_each_modality(cs, seed, i, rec,
                          [&p](Volume3& vol, RngStream& mrng, TransformRecord& r,
                               const char* name) {
                            const double m = p.multiplier.sample(mrng);
                            record_range_sample(r, name, "multiplier", m);
                            for (double& v : vol.data) v *= m;
                          });
        break;
      }
      case TransformKind::kGamma:
      case TransformKind::kGammaInverted: {
        const auto& p = std::get<GammaParams>(spec.params);
        const bool inverted = spec.kind == TransformKind::kGammaInverted;
        for_each_modality(cs, seed, i, rec,
                          [&p, inverted](Volume3& vol, RngStream& mrng,
                                         TransformRecord& r, const char* name) {
                            const double g = p.gamma.sample(mrng);
                            record_range_sample(r, name, "gamma", g);
                            vol = gamma_transform(vol, g, inverted);
                          });
        break;
      }
    }
    out.records.push_back(std::move(rec));
  }

  cs.validate();
  return out;
}

PetCtCase apply_scheme(const PetCtCase& input, const AugmentScheme& scheme,
                       std::uint64_t seed) {
  return apply_scheme_traced(input, scheme, seed).result;
}

}  // namespace petct
