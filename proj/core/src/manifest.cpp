#include "petct/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "petct/nifti.hpp"

namespace petct {

namespace {

using nlohmann::json;

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : root / p;
}

void DatasetManifest::validate(bool check_files) const {
  std::set<std::string> seen;
  for (const auto& entry : cases) {
    if (!seen.insert(entry.case_id).second) {
      throw std::invalid_argument("manifest: duplicate case_id " + entry.case_id);
    }
    if (!check_files) continue;
    for (const auto& p : {entry.ct_path, entry.pet_path}) {
      if (!std::filesystem::exists(resolve(p))) {
        throw std::invalid_argument("manifest: missing file " + resolve(p).string());
      }
    }
    if (entry.label_path && !std::filesystem::exists(resolve(*entry.label_path))) {
      throw std::invalid_argument("manifest: missing file " + resolve(*entry.label_path).string());
    }
  }
}

DatasetManifest manifest_from_json(const std::string& text,
                                   const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  DatasetManifest manifest;
  const std::filesystem::path root = j.value("root", std::string("."));
  manifest.root = root.is_absolute() ? root : base_dir / root;
  for (const auto& jc : j.at("cases")) {
    ManifestEntry entry;
    entry.case_id = jc.at("case_id").get<std::string>();
    entry.tracer = tracer_from_string(jc.at("tracer").get<std::string>());
    entry.ct_path = jc.at("ct_path").get<std::string>();
    entry.pet_path = jc.at("pet_path").get<std::string>();
    if (jc.contains("label_path") && !jc["label_path"].is_null()) {
      entry.label_path = jc["label_path"].get<std::string>();
    }
    manifest.cases.push_back(std::move(entry));
  }
  return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json j;
  j["root"] = manifest.root.string();
  j["cases"] = json::array();
  for (const auto& entry : manifest.cases) {
    json jc{{"case_id", entry.case_id},
            {"tracer", to_string(entry.tracer)},
            {"ct_path", entry.ct_path.string()},
            {"pet_path", entry.pet_path.string()}};
    if (entry.label_path) jc["label_path"] = entry.label_path->string();
    j["cases"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  DatasetManifest manifest =
      manifest_from_json(text, std::filesystem::absolute(path).parent_path());
  manifest.validate(true);
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << manifest_to_json(manifest);
}

DatasetManifest scan_dataset_directory(const std::filesystem::path& root,
                                       Tracer default_tracer) {
  if (!std::filesystem::is_directory(root)) {
    throw std::invalid_argument("manifest scan: not a directory: " + root.string());
  }
  DatasetManifest manifest;
  manifest.root = std::filesystem::absolute(root);

  auto strip_suffix = [](const std::string& name,
                         const std::string& role) -> std::optional<std::string> {
    for (const char* ext : {".nii.gz", ".nii"}) {
      const std::string suffix = "_" + role + ext;
      if (name.size() > suffix.size() &&
          name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return name.substr(0, name.size() - suffix.size());
      }
    }
    return std::nullopt;
  };

  struct Found {
    std::filesystem::path ct, pet, label;
  };
  std::map<std::string, Found> found;
  for (const auto& dir_entry : std::filesystem::directory_iterator(root)) {
    if (!dir_entry.is_regular_file()) continue;
    const std::string name = dir_entry.path().filename().string();
    if (auto id = strip_suffix(name, "ct")) found[*id].ct = name;
    else if (auto id = strip_suffix(name, "pet")) found[*id].pet = name;
    else if (auto id = strip_suffix(name, "label")) found[*id].label = name;
  }

  for (const auto& [case_id, f] : found) {
    if (f.ct.empty() || f.pet.empty()) continue;  // incomplete pair
    ManifestEntry entry;
    entry.case_id = case_id;
    const std::string lower = lowercase(case_id);
    entry.tracer = lower.find("psma") != std::string::npos ? Tracer::kPSMA
                   : lower.find("fdg") != std::string::npos ? Tracer::kFDG
                                                            : default_tracer;
    entry.ct_path = f.ct;
    entry.pet_path = f.pet;
    if (!f.label.empty()) entry.label_path = f.label;
    manifest.cases.push_back(std::move(entry));
  }
  manifest.validate(true);
  return manifest;
}

PetCtCase load_case(const DatasetManifest& manifest, const ManifestEntry& entry) {
  PetCtCase cs;
  cs.case_id = entry.case_id;
  cs.tracer = entry.tracer;
  cs.ct = load_nifti(manifest.resolve(entry.ct_path), VolumeKind::kHU);
  cs.pet = load_nifti(manifest.resolve(entry.pet_path), VolumeKind::kSUV);
  if (entry.label_path) {
    cs.label = load_nifti(manifest.resolve(*entry.label_path), VolumeKind::kBinary);
  }
  cs.validate();
  return cs;
}

}  // namespace petct
