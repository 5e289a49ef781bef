#ifndef PETCT_MANIFEST_HPP
#define PETCT_MANIFEST_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "petct/case.hpp"

namespace petct {

struct ManifestEntry {
  std::string case_id;
  Tracer tracer = Tracer::kFDG;
  std::filesystem::path ct_path;
  std::filesystem::path pet_path;
  std::optional<std::filesystem::path> label_path;
};

/// Dataset listing. Paths are stored relative to `root` (absolute paths are
/// kept as-is); a relative root resolves against the manifest's directory.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> cases;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  /// Unique case ids and, when check_files is set, existing files.
  void validate(bool check_files) const;
};

DatasetManifest manifest_from_json(const std::string& text,
                                   const std::filesystem::path& base_dir);
std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Builds a manifest from files named <case_id>_ct.nii.gz / <case_id>_pet.nii.gz
/// (optionally <case_id>_label.nii.gz; plain .nii accepted). The tracer is
/// inferred from a "psma"/"fdg" substring in the case id, falling back to
/// `default_tracer`.
DatasetManifest scan_dataset_directory(const std::filesystem::path& root,
                                       Tracer default_tracer = Tracer::kFDG);

/// Loads the CT/PET(/label) volumes of one manifest entry.
PetCtCase load_case(const DatasetManifest& manifest, const ManifestEntry& entry);

}  // namespace petct

#endif  // PETCT_MANIFEST_HPP
