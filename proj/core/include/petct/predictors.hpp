#ifndef PETCT_PREDICTORS_HPP
#define PETCT_PREDICTORS_HPP

#include <filesystem>
#include <vector>

#include "petct/scheduler.hpp"

namespace petct {

/// Always answers the same probability map, expressed in the case frame,
/// for any input and transform (the pass output is mirrored accordingly, so
/// the scheduler's inversion recovers the fixed answer).
class ConstantOutputPredictor final : public Predictor {
 public:
  explicit ConstantOutputPredictor(Volume3 output);
  Volume3 predict(const PetCtCase& input, const MirrorAxes& axes) override;

 private:
  Volume3 output_;
};

/// Voxelwise logistic of the PET uptake. Mirror-equivariant by construction:
/// predict(mirror(case)) == mirror(predict(case)).
class SuvSigmoidPredictor final : public Predictor {
 public:
  explicit SuvSigmoidPredictor(double midpoint_suv = 2.5, double steepness = 1.0);
  Volume3 predict(const PetCtCase& input, const MirrorAxes& axes) override;

 private:
  double midpoint_;
  double steepness_;
};

/// Wraps a predictor and advances a scripted clock by the next latency in
/// the script on every pass (the last entry repeats once exhausted).
class ScriptedLatencyPredictor final : public Predictor {
 public:
  ScriptedLatencyPredictor(Predictor& inner, std::vector<double> latencies_s,
                           ScriptedClock& clock);
  Volume3 predict(const PetCtCase& input, const MirrorAxes& axes) override;

 private:
  Predictor& inner_;
  std::vector<double> latencies_s_;
  std::size_t next_ = 0;
  ScriptedClock& clock_;
};

/// Adapter for an external model: each pass writes the (mirrored) CT and
/// PET as NIfTI files, invokes the configured command with the placeholders
/// {ct}, {pet} and {out} substituted, and reads the probability volume the
/// command wrote to {out}.
class CommandPredictor final : public Predictor {
 public:
  CommandPredictor(std::string command_template, std::filesystem::path work_dir);
  Volume3 predict(const PetCtCase& input, const MirrorAxes& axes) override;

 private:
  std::string command_template_;
  std::filesystem::path work_dir_;
  int pass_counter_ = 0;
};

}  // namespace petct

#endif  // PETCT_PREDICTORS_HPP
