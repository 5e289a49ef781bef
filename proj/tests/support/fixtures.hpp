// Shared helpers for building synthetic volumes, cases and temp directories.
#ifndef PETCT_TESTS_FIXTURES_HPP
#define PETCT_TESTS_FIXTURES_HPP

#include <filesystem>
#include <random>
#include <string>

#include "petct/case.hpp"
#include "petct/volume.hpp"

namespace petct::testing {

// std::mt19937_64 keeps test-data generation independent of petct::RngStream.
inline Volume3 random_volume(std::mt19937_64& gen, std::array<int, 3> dims,
                             VolumeKind kind, double lo, double hi,
                             std::array<double, 3> spacing = {1.0, 1.0, 1.0}) {
  Volume3 vol(dims, spacing, kind);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : vol.data) v = dist(gen);
  return vol;
}

inline Volume3 random_binary(std::mt19937_64& gen, std::array<int, 3> dims,
                             double p_foreground,
                             std::array<double, 3> spacing = {1.0, 1.0, 1.0}) {
  Volume3 vol(dims, spacing, VolumeKind::kBinary);
  std::bernoulli_distribution dist(p_foreground);
  for (double& v : vol.data) v = dist(gen) ? 1.0 : 0.0;
  return vol;
}

inline PetCtCase make_case(std::mt19937_64& gen, const std::string& case_id,
                           std::array<int, 3> dims = {6, 6, 4},
                           Tracer tracer = Tracer::kFDG,
                           std::array<double, 3> spacing = {2.0, 2.0, 3.0}) {
  PetCtCase cs;
  cs.case_id = case_id;
  cs.tracer = tracer;
  cs.ct = random_volume(gen, dims, VolumeKind::kHU, -1000.0, 1000.0, spacing);
  cs.pet = random_volume(gen, dims, VolumeKind::kSUV, 0.0, 15.0, spacing);
  cs.label = random_binary(gen, dims, 0.2, spacing);
  return cs;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    dir_ = std::filesystem::temp_directory_path() /
           ("petct_test_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

}  // namespace petct::testing

#endif  // PETCT_TESTS_FIXTURES_HPP
