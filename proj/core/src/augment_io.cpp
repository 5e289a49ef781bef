#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "petct/augment.hpp"

namespace petct {

namespace {

using nlohmann::json;

json range_to_json(const ParamRange& r) { return json::array({r.lo, r.hi}); }

ParamRange range_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("scheme config: amplitude range must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json amplitude_to_json(const TransformSpec& spec) {
  json amp = json::object();
  std::visit(
      [&amp](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AffineParams>) {
          amp["rotation_deg"] = range_to_json(p.rotation_deg);
          amp["scale"] = range_to_json(p.scale);
          amp["interp"] = to_string(p.interp);
        } else if constexpr (std::is_same_v<T, GaussianNoiseParams>) {
          amp["sigma_rel"] = range_to_json(p.sigma_rel);
        } else if constexpr (std::is_same_v<T, GaussianBlurParams>) {
          amp["sigma_vox"] = range_to_json(p.sigma_vox);
        } else if constexpr (std::is_same_v<T, BrightnessParams>) {
          amp["multiplier"] = range_to_json(p.multiplier);
        } else if constexpr (std::is_same_v<T, GammaParams>) {
          amp["gamma"] = range_to_json(p.gamma);
        } else if constexpr (std::is_same_v<T, MirrorParams>) {
          amp["axis_p"] = p.axis_probability;
        } else {  // MisalignConfig
          amp["max_rotation_deg"] = p.max_rotation_deg;
          amp["max_shift_voxels"] = p.max_shift_voxels;
          amp["p_rotation"] = p.p_rotation;
          amp["p_translation"] = p.p_translation;
          amp["interp"] = to_string(p.interp);
          amp["ct_pad_hu"] = p.ct_pad_hu;
        }
      },
      spec.params);
  return amp;
}

TransformParams amplitude_from_json(TransformKind kind, const json& amp) {
  switch (kind) {
    case TransformKind::kAffine: {
      AffineParams p;
      if (amp.contains("rotation_deg")) p.rotation_deg = range_from_json(amp["rotation_deg"]);
      if (amp.contains("scale")) p.scale = range_from_json(amp["scale"]);
      if (amp.contains("interp")) p.interp = interp_from_string(amp["interp"].get<std::string>());
      return p;
    }
    case TransformKind::kGaussianNoise: {
      GaussianNoiseParams p;
      if (amp.contains("sigma_rel")) p.sigma_rel = range_from_json(amp["sigma_rel"]);
      return p;
    }
    case TransformKind::kGaussianBlur: {
      GaussianBlurParams p;
      if (amp.contains("sigma_vox")) p.sigma_vox = range_from_json(amp["sigma_vox"]);
      return p;
    }
    case TransformKind::kBrightness: {
      BrightnessParams p;
      if (amp.contains("multiplier")) p.multiplier = range_from_json(amp["multiplier"]);
      return p;
    }
    case TransformKind::kGamma:
    case TransformKind::kGammaInverted: {
      GammaParams p;
      if (amp.contains("gamma")) p.gamma = range_from_json(amp["gamma"]);
      return p;
    }
    case TransformKind::kMirror: {
      MirrorParams p;
      if (amp.contains("axis_p")) p.axis_probability = amp["axis_p"].get<double>();
      return p;
    }
    case TransformKind::kMisalign: {
      MisalignConfig cfg;
      if (amp.contains("max_rotation_deg")) cfg.max_rotation_deg = amp["max_rotation_deg"].get<double>();
      if (amp.contains("max_shift_voxels")) {
        cfg.max_shift_voxels = amp["max_shift_voxels"].get<std::array<double, 3>>();
      }
      if (amp.contains("p_rotation")) cfg.p_rotation = amp["p_rotation"].get<double>();
      if (amp.contains("p_translation")) cfg.p_translation = amp["p_translation"].get<double>();
      if (amp.contains("interp")) cfg.interp = interp_from_string(amp["interp"].get<std::string>());
      if (amp.contains("ct_pad_hu")) cfg.ct_pad_hu = amp["ct_pad_hu"].get<double>();
      return cfg;
    }
  }
  throw std::invalid_argument("scheme config: unknown transform kind");
}

}  // namespace

std::string scheme_to_json(const AugmentScheme& scheme) {
  json j;
  j["name"] = scheme.name;
  j["transforms"] = json::array();
  for (const auto& t : scheme.transforms) {
    j["transforms"].push_back({{"kind", to_string(t.kind)},
                               {"p", t.probability},
                               {"amplitude", amplitude_to_json(t)}});
  }
  return j.dump(2) + "\n";
}

AugmentScheme scheme_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scheme config: ") + e.what());
  }
  AugmentScheme scheme;
  scheme.name = j.at("name").get<std::string>();
  for (const auto& jt : j.at("transforms")) {
    TransformSpec spec;
    spec.kind = transform_kind_from_string(jt.at("kind").get<std::string>());
    spec.probability = jt.at("p").get<double>();
    spec.params = amplitude_from_json(
        spec.kind, jt.contains("amplitude") ? jt["amplitude"] : json::object());
    scheme.transforms.push_back(std::move(spec));
  }
  scheme.validate();
  return scheme;
}

void save_scheme(const AugmentScheme& scheme, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scheme config: " + path.string());
  out << scheme_to_json(scheme);
}

AugmentScheme load_scheme(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scheme config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return scheme_from_json(text);
}

}  // namespace petct
