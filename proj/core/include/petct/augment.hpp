#ifndef PETCT_AUGMENT_HPP
#define PETCT_AUGMENT_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "petct/case.hpp"
#include "petct/misalign.hpp"
#include "petct/resample.hpp"
#include "petct/rng.hpp"

namespace petct {

enum class TransformKind : std::uint8_t {
  kAffine,
  kGaussianNoise,
  kGaussianBlur,
  kBrightness,
  kGamma,
  kGammaInverted,
  kMirror,
  kMisalign,
};

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

/// Closed interval for uniform sampling.
struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;

  double sample(RngStream& rng) const { return rng.uniform(lo, hi); }
  bool operator==(const ParamRange&) const = default;
};

/// Rotation about z plus isotropic scaling, both about the volume center.
/// Labels always resample with NEAREST; `interp` governs ct/pet.
struct AffineParams {
  ParamRange rotation_deg{-30.0, 30.0};
  ParamRange scale{0.7, 1.4};
  Interp interp = Interp::kTrilinear;
  bool operator==(const AffineParams&) const = default;
};

/// Additive zero-mean noise; sigma is a fraction of the per-volume
/// intensity standard deviation.
struct GaussianNoiseParams {
  ParamRange sigma_rel{0.0, 0.1};
  bool operator==(const GaussianNoiseParams&) const = default;
};

struct GaussianBlurParams {
  ParamRange sigma_vox{0.5, 1.0};
  bool operator==(const GaussianBlurParams&) const = default;
};

struct BrightnessParams {
  ParamRange multiplier{0.75, 1.25};
  bool operator==(const BrightnessParams&) const = default;
};

/// Used by both GAMMA and GAMMA_INVERTED; the inverted variant negates the
/// image before and after the power transform.
struct GammaParams {
  ParamRange gamma{0.7, 1.5};
  bool operator==(const GammaParams&) const = default;
};

struct MirrorParams {
  double axis_probability = 0.5;  // each axis flips independently
  bool operator==(const MirrorParams&) const = default;
};

using TransformParams =
    std::variant<AffineParams, GaussianNoiseParams, GaussianBlurParams,
                 BrightnessParams, GammaParams, MirrorParams, MisalignConfig>;

struct TransformSpec {
  TransformKind kind = TransformKind::kAffine;
  double probability = 1.0;
  TransformParams params;

  /// Checks probability in [0,1], lo <= hi on every range, and that the
  /// params alternative matches the kind.
  void validate() const;
  bool operator==(const TransformSpec&) const = default;
};

/// Declarative augmentation pipeline; transforms apply in order.
struct AugmentScheme {
  std::string name;
  std::vector<TransformSpec> transforms;

  bool contains(TransformKind kind) const;
  const TransformSpec* find(TransformKind kind) const;
  void validate() const;
  bool operator==(const AugmentScheme&) const = default;
};

/// The reference training pipeline: AFFINE, GAUSSIAN_NOISE, GAUSSIAN_BLUR,
/// BRIGHTNESS, GAMMA_INVERTED, GAMMA, MIRROR with framework-convention
/// default probabilities and amplitudes.
AugmentScheme baseline_scheme();

/// baseline_scheme() with Gaussian blur and inverted gamma removed and the
/// affine amplitudes reduced (rotation +-15 deg, scale [0.85, 1.15]), to
/// avoid blurring or washing out small lesions.
AugmentScheme subtle_scheme();

/// Prepends a MISALIGN spec so the CT displacement happens before the
/// shared spatial transforms; the scheme name gains a "+misal" suffix.
/// Throws std::invalid_argument when the scheme already has MISALIGN.
AugmentScheme with_misalignment(const AugmentScheme& scheme,
                                const MisalignConfig& cfg);

/// One entry of the application trace: whether a transform fired and the
/// parameters it sampled (flat name -> value pairs, suitable for provenance
/// records and tests).
struct TransformRecord {
  TransformKind kind = TransformKind::kAffine;
  bool fired = false;
  std::vector<std::pair<std::string, double>> sampled;

  double value_of(const std::string& name) const;
};

struct AugmentResult {
  PetCtCase result;
  std::vector<TransformRecord> records;
};

/// Applies the scheme with a deterministic RNG stream per (seed, case_id,
/// transform index). Spatial transforms hit ct/pet/label with identical
/// geometry, intensity transforms hit ct and pet independently, MISALIGN
/// hits the ct only.
PetCtCase apply_scheme(const PetCtCase& input, const AugmentScheme& scheme,
                       std::uint64_t seed);

/// apply_scheme plus the per-transform trace.
AugmentResult apply_scheme_traced(const PetCtCase& input,
                                  const AugmentScheme& scheme,
                                  std::uint64_t seed);

/// Min-max normalizes to [0,1], raises to `gamma`, rescales to the original
/// range. Constant volumes are returned unchanged. `inverted` negates the
/// image before and after.
Volume3 gamma_transform(const Volume3& vol, double gamma, bool inverted = false);

/// Adds independent zero-mean Gaussian noise with absolute sigma.
Volume3 gaussian_noise(const Volume3& vol, double sigma, RngStream& rng);

/// Separable Gaussian smoothing, sigma in voxels, reflected boundaries.
Volume3 gaussian_blur(const Volume3& vol, double sigma_vox);

// Scheme config JSON:
// {"name": str, "transforms": [{"kind": str, "p": float, "amplitude": {...}}]}
std::string scheme_to_json(const AugmentScheme& scheme);
AugmentScheme scheme_from_json(const std::string& text);
void save_scheme(const AugmentScheme& scheme, const std::filesystem::path& path);
AugmentScheme load_scheme(const std::filesystem::path& path);

}  // namespace petct

#endif  // PETCT_AUGMENT_HPP
