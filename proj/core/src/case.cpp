#include "petct/case.hpp"

#include <stdexcept>

namespace petct {

std::string to_string(Tracer tracer) {
  return tracer == Tracer::kFDG ? "FDG" : "PSMA";
}

Tracer tracer_from_string(const std::string& name) {
  if (name == "FDG") return Tracer::kFDG;
  if (name == "PSMA") return Tracer::kPSMA;
  throw std::invalid_argument("unknown tracer: " + name);
}

void PetCtCase::validate() const {
  ct.validate();
  pet.validate();
  if (ct.kind != VolumeKind::kHU) {
    throw std::invalid_argument("PetCtCase: ct must have kind HU");
  }
  if (pet.kind != VolumeKind::kSUV) {
    throw std::invalid_argument("PetCtCase: pet must have kind SUV");
  }
  if (!ct.same_grid(pet)) {
    throw std::invalid_argument("PetCtCase: ct and pet grids differ");
  }
  if (label) {
    label->validate();
    if (label->kind != VolumeKind::kBinary) {
      throw std::invalid_argument("PetCtCase: label must have kind BINARY");
    }
    if (!label->same_grid(ct)) {
      throw std::invalid_argument("PetCtCase: label grid differs from ct/pet");
    }
  }
}

}  // namespace petct
