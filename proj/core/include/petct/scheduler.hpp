#ifndef PETCT_SCHEDULER_HPP
#define PETCT_SCHEDULER_HPP

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "petct/case.hpp"
#include "petct/volume.hpp"

namespace petct {

/// Per-case inference time budget. Defaults follow a 5-minute case limit
/// with 170 s for the whole ensemble including TTA and a 25 s per-model
/// window that covers the first pass plus its TTA repeats.
struct SchedulerBudget {
  double case_limit_s = 300.0;
  double ensemble_limit_s = 170.0;
  double tta_limit_per_model_s = 25.0;
  int max_tta = 2;
  int max_models = 5;

  void validate() const;
  bool operator==(const SchedulerBudget&) const = default;
};

struct ScheduleOptions {
  /// Estimate per-model latency from a running average over completed
  /// models instead of the first model only.
  bool running_average_latency = false;
  /// Treat the per-model TTA window as additional to the first pass
  /// (n_tta = floor(limit / t)) instead of including it.
  bool tta_window_excludes_first_pass = false;
};

/// Monotonic time source; injectable so schedules are testable without
/// wall-clock dependence.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_s() const = 0;
};

class SteadyClock final : public Clock {
 public:
  double now_s() const override;
};

/// Manually advanced clock for simulations and tests.
class ScriptedClock final : public Clock {
 public:
  double now_s() const override { return t_; }
  void advance(double dt_s) { t_ += dt_s; }

 private:
  double t_ = 0.0;
};

/// Behavioral contract for a segmentation model. `axes` names the mirror
/// transform of the pass: the implementation predicts on the mirrored case
/// and returns the probability volume in that mirrored frame (the scheduler
/// mirrors it back before accumulation). Identity axes = plain forward pass.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Volume3 predict(const PetCtCase& input, const MirrorAxes& axes) = 0;
};

/// Timing and decision record of one dynamic-inference run.
struct ScheduleTrace {
  double first_pass_s = 0.0;
  int n_tta = 0;
  int n_models = 0;
  std::vector<double> per_pass_s;
  double total_s = 0.0;
  std::vector<std::string> decisions;
};

struct DynamicResult {
  Volume3 probability;
  ScheduleTrace trace;
};

/// Number of TTA passes for one model, given the first-pass latency:
/// min(max_tta, max(0, floor(tta_limit / first_pass) - 1)), so that
/// (1 + n_tta) * first_pass <= tta_limit under stationary latency.
int plan_tta(double first_pass_s, const SchedulerBudget& budget);

/// Number of models to ensemble, given the per-model time including TTA:
/// clamp(floor(ensemble_limit / model_time), 1, max_models). The first,
/// already finished model always counts.
int plan_ensemble(double model_time_s, const SchedulerBudget& budget);

/// Deterministic prefix of the fixed mirror order
/// [{x}, {y}, {z}, {x,y}, {x,z}, {y,z}, {x,y,z}]; max_count <= 7.
std::vector<MirrorAxes> tta_transform_sequence(int max_count);

/// Runs the first predictor, plans TTA from its first-pass time, plans the
/// ensemble width from the first model's total time, runs the remaining
/// models with the same TTA transforms, and averages all passes voxelwise.
/// Failing passes are logged and skipped; the run degrades instead of
/// aborting.
DynamicResult run_dynamic_inference(const PetCtCase& input,
                                    std::span<Predictor* const> predictors,
                                    const SchedulerBudget& budget, Clock& clock,
                                    const ScheduleOptions& options = {});

// Trace JSON: {"first_pass_s":., "n_tta":., "n_models":., "per_pass_s":[.],
// "total_s":., "decisions":[.]}
std::string trace_to_json(const ScheduleTrace& trace);
ScheduleTrace trace_from_json(const std::string& text);

// Budget JSON with the field names above; missing fields keep defaults.
SchedulerBudget budget_from_json(const std::string& text);
std::string budget_to_json(const SchedulerBudget& budget);

}  // namespace petct

#endif  // PETCT_SCHEDULER_HPP
