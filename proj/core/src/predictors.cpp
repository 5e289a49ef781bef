#include "petct/predictors.hpp"

#include <cmath>
#include <cstdlib>
#include <format>
#include <stdexcept>
#include <utility>

#include "petct/nifti.hpp"

namespace petct {

ConstantOutputPredictor::ConstantOutputPredictor(Volume3 output)
    : output_(std::move(output)) {
  output_.kind = VolumeKind::kProb;
  output_.validate();
}

Volume3 ConstantOutputPredictor::predict(const PetCtCase&, const MirrorAxes& axes) {
  return mirror(output_, axes);
}

SuvSigmoidPredictor::SuvSigmoidPredictor(double midpoint_suv, double steepness)
    : midpoint_(midpoint_suv), steepness_(steepness) {}

Volume3 SuvSigmoidPredictor::predict(const PetCtCase& input, const MirrorAxes& axes) {
  Volume3 prob = mirror(input.pet, axes);
  prob.kind = VolumeKind::kProb;
  for (double& v : prob.data) {
    v = 1.0 / (1.0 + std::exp(-steepness_ * (v - midpoint_)));
  }
  return prob;
}

ScriptedLatencyPredictor::ScriptedLatencyPredictor(Predictor& inner,
                                                   std::vector<double> latencies_s,
                                                   ScriptedClock& clock)
    : inner_(inner), latencies_s_(std::move(latencies_s)), clock_(clock) {
  if (latencies_s_.empty()) {
    throw std::invalid_argument("ScriptedLatencyPredictor: empty latency script");
  }
}

Volume3 ScriptedLatencyPredictor::predict(const PetCtCase& input,
                                          const MirrorAxes& axes) {
  const std::size_t i = std::min(next_, latencies_s_.size() - 1);
  ++next_;
  clock_.advance(latencies_s_[i]);
  return inner_.predict(input, axes);
}

CommandPredictor::CommandPredictor(std::string command_template,
                                   std::filesystem::path work_dir)
    : command_template_(std::move(command_template)),
      work_dir_(std::move(work_dir)) {
  if (command_template_.find("{out}") == std::string::npos) {
    throw std::invalid_argument("CommandPredictor: command template needs an {out} placeholder");
  }
  std::filesystem::create_directories(work_dir_);
}

namespace {

void replace_all(std::string& text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
}

}  // namespace

Volume3 CommandPredictor::predict(const PetCtCase& input, const MirrorAxes& axes) {
  const int pass = pass_counter_++;
  const auto ct_path = work_dir_ / std::format("pass{:03d}_ct.nii.gz", pass);
  const auto pet_path = work_dir_ / std::format("pass{:03d}_pet.nii.gz", pass);
  const auto out_path = work_dir_ / std::format("pass{:03d}_prob.nii.gz", pass);

  save_nifti(mirror(input.ct, axes), ct_path);
  save_nifti(mirror(input.pet, axes), pet_path);

  std::string command = command_template_;
  replace_all(command, "{ct}", "'" + ct_path.string() + "'");
  replace_all(command, "{pet}", "'" + pet_path.string() + "'");
  replace_all(command, "{out}", "'" + out_path.string() + "'");

  const int rc = std::system(command.c_str());
  if (rc != 0) {
    throw std::runtime_error(std::format("predictor command exited with status {}", rc));
  }
  return load_nifti(out_path, VolumeKind::kProb);
}

}  // namespace petct
