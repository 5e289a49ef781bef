#include "petct/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <format>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace petct {

void SchedulerBudget::validate() const {
  if (!(tta_limit_per_model_s > 0.0 && tta_limit_per_model_s <= ensemble_limit_s &&
        ensemble_limit_s <= case_limit_s)) {
    throw std::invalid_argument(
        "SchedulerBudget: need 0 < tta_limit <= ensemble_limit <= case_limit");
  }
  if (max_tta < 0) throw std::invalid_argument("SchedulerBudget: max_tta must be >= 0");
  if (max_models < 1) throw std::invalid_argument("SchedulerBudget: max_models must be >= 1");
}

double SteadyClock::now_s() const {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int plan_tta(double first_pass_s, const SchedulerBudget& budget) {
  if (!(first_pass_s > 0.0)) {
    throw std::invalid_argument("plan_tta: first_pass_s must be > 0");
  }
  const auto fit = static_cast<long>(std::floor(budget.tta_limit_per_model_s / first_pass_s));
  return static_cast<int>(std::clamp<long>(fit - 1, 0, budget.max_tta));
}

int plan_ensemble(double model_time_s, const SchedulerBudget& budget) {
  if (!(model_time_s > 0.0)) {
    throw std::invalid_argument("plan_ensemble: model_time_s must be > 0");
  }
  const auto fit = static_cast<long>(std::floor(budget.ensemble_limit_s / model_time_s));
  return static_cast<int>(std::clamp<long>(fit, 1, budget.max_models));
}

std::vector<MirrorAxes> tta_transform_sequence(int max_count) {
  if (max_count < 0 || max_count > 7) {
    throw std::invalid_argument("tta_transform_sequence: max_count must be in [0, 7]");
  }
  static const std::vector<MirrorAxes> order = {
      {true, false, false}, {false, true, false}, {false, false, true},
      {true, true, false},  {true, false, true},  {false, true, true},
      {true, true, true}};
  return {order.begin(), order.begin() + max_count};
}

namespace {

constexpr double kMinMeasurableSeconds = 1e-9;

struct Accumulator {
  Volume3 sum;
  std::size_t n = 0;

  explicit Accumulator(const Volume3& grid_like) {
    sum = grid_like;
    sum.kind = VolumeKind::kProb;
    std::fill(sum.data.begin(), sum.data.end(), 0.0);
  }

  void add(const Volume3& v) {
    for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += v.data[i];
    ++n;
  }

  Volume3 mean() const {
    Volume3 out = sum;
    if (n > 0) {
      for (double& v : out.data) v /= static_cast<double>(n);
    }
    return out;
  }
};

void check_prediction(const Volume3& prob, const PetCtCase& input) {
  if (prob.dims != input.pet.dims || prob.spacing != input.pet.spacing) {
    throw std::runtime_error("prediction grid does not match the case grid");
  }
  for (double v : prob.data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::runtime_error("prediction values outside [0, 1]");
    }
  }
}

}  // namespace

DynamicResult run_dynamic_inference(const PetCtCase& input,
                                    std::span<Predictor* const> predictors,
                                    const SchedulerBudget& budget, Clock& clock,
                                    const ScheduleOptions& options) {
  if (predictors.empty()) {
    throw std::invalid_argument("run_dynamic_inference: no predictors given");
  }
  budget.validate();

  DynamicResult result{Volume3{}, {}};
  ScheduleTrace& trace = result.trace;
  Accumulator acc(input.pet);

  auto run_pass = [&](Predictor* predictor, const MirrorAxes& axes,
                      int model_index) {
    const double t0 = clock.now_s();
    try {
      Volume3 prob = predictor->predict(input, axes);
      check_prediction(prob, input);
      acc.add(mirror(prob, axes));
    } catch (const std::exception& e) {
      trace.decisions.push_back(std::format(
          "model {} pass {} failed, continuing without it: {}", model_index,
          to_string(axes), e.what()));
    }
    const double dt = clock.now_s() - t0;
    trace.per_pass_s.push_back(dt);
    return dt;
  };

  // First pass of the first model fixes the latency estimate.
  trace.first_pass_s =
      std::max(run_pass(predictors[0], MirrorAxes{}, 0), kMinMeasurableSeconds);
  trace.decisions.push_back(
      std::format("first pass took {:.3f} s", trace.first_pass_s));

  trace.n_tta = options.tta_window_excludes_first_pass
                    ? static_cast<int>(std::clamp<long>(
                          static_cast<long>(std::floor(budget.tta_limit_per_model_s /
                                                       trace.first_pass_s)),
                          0, budget.max_tta))
                    : plan_tta(trace.first_pass_s, budget);
  trace.decisions.push_back(std::format(
      "planned {} TTA passes within the {:.0f} s per-model window", trace.n_tta,
      budget.tta_limit_per_model_s));

  const std::vector<MirrorAxes> transforms = tta_transform_sequence(trace.n_tta);
  for (const auto& axes : transforms) run_pass(predictors[0], axes, 0);

  double model0_time = 0.0;
  for (double dt : trace.per_pass_s) model0_time += dt;
  model0_time = std::max(model0_time, kMinMeasurableSeconds);

  const int planned_models = plan_ensemble(model0_time, budget);
  trace.n_models = std::min<int>(planned_models, static_cast<int>(predictors.size()));
  trace.decisions.push_back(std::format(
      "first model took {:.3f} s including TTA; planned {} of {} available models",
      model0_time, trace.n_models, predictors.size()));

  double elapsed = model0_time;
  double model_time_estimate = model0_time;
  int models_run = 1;
  for (int m = 1; m < trace.n_models; ++m) {
    if (options.running_average_latency &&
        elapsed + model_time_estimate > budget.ensemble_limit_s) {
      trace.decisions.push_back(std::format(
          "stopping after {} models: estimated next model ({:.3f} s) "
          "exceeds the remaining budget", models_run, model_time_estimate));
      trace.n_models = models_run;
      break;
    }
    double model_time = run_pass(predictors[m], MirrorAxes{}, m);
    for (const auto& axes : transforms) model_time += run_pass(predictors[m], axes, m);
    elapsed += model_time;
    ++models_run;
    model_time_estimate = elapsed / models_run;
  }

  trace.total_s = 0.0;
  for (double dt : trace.per_pass_s) trace.total_s += dt;

  if (acc.n == 0) {
    trace.decisions.push_back("all passes failed; returning an empty probability map");
  }
  result.probability = acc.mean();
  return result;
}

namespace {
using nlohmann::json;
}

std::string trace_to_json(const ScheduleTrace& trace) {
  json j{{"first_pass_s", trace.first_pass_s},
         {"n_tta", trace.n_tta},
         {"n_models", trace.n_models},
         {"per_pass_s", trace.per_pass_s},
         {"total_s", trace.total_s},
         {"decisions", trace.decisions}};
  return j.dump(2) + "\n";
}

ScheduleTrace trace_from_json(const std::string& text) {
  const json j = json::parse(text);
  ScheduleTrace trace;
  trace.first_pass_s = j.at("first_pass_s").get<double>();
  trace.n_tta = j.at("n_tta").get<int>();
  trace.n_models = j.at("n_models").get<int>();
  trace.per_pass_s = j.at("per_pass_s").get<std::vector<double>>();
  trace.total_s = j.at("total_s").get<double>();
  trace.decisions = j.at("decisions").get<std::vector<std::string>>();
  return trace;
}

SchedulerBudget budget_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("budget config: ") + e.what());
  }
  SchedulerBudget budget;
  budget.case_limit_s = j.value("case_limit_s", budget.case_limit_s);
  budget.ensemble_limit_s = j.value("ensemble_limit_s", budget.ensemble_limit_s);
  budget.tta_limit_per_model_s = j.value("tta_limit_per_model_s", budget.tta_limit_per_model_s);
  budget.max_tta = j.value("max_tta", budget.max_tta);
  budget.max_models = j.value("max_models", budget.max_models);
  budget.validate();
  return budget;
}

std::string budget_to_json(const SchedulerBudget& budget) {
  json j{{"case_limit_s", budget.case_limit_s},
         {"ensemble_limit_s", budget.ensemble_limit_s},
         {"tta_limit_per_model_s", budget.tta_limit_per_model_s},
         {"max_tta", budget.max_tta},
         {"max_models", budget.max_models}};
  return j.dump(2) + "\n";
}

}  // namespace petct
