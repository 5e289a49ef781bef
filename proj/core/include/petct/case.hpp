#ifndef PETCT_CASE_HPP
#define PETCT_CASE_HPP

#include <optional>
#include <string>

#include "petct/volume.hpp"

namespace petct {

enum class Tracer : std::uint8_t { kFDG, kPSMA };

std::string to_string(Tracer tracer);
Tracer tracer_from_string(const std::string& name);

/// Co-registered CT/PET/label triple; the unit of augmentation and
/// evaluation. All volumes live on one grid.
struct PetCtCase {
  std::string case_id;
  Tracer tracer = Tracer::kFDG;
  Volume3 ct;                    // HU
  Volume3 pet;                   // SUV
  std::optional<Volume3> label;  // BINARY

  /// Throws std::invalid_argument when volumes disagree on dims/spacing or
  /// carry the wrong kind.
  void validate() const;

  bool operator==(const PetCtCase&) const = default;
};

}  // namespace petct

#endif  // PETCT_CASE_HPP
