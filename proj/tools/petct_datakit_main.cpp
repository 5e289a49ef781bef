// petct-datakit: batch CLI for PET/CT dataset augmentation, SUV-threshold
// postprocessing, lesion-metric evaluation, and deadline-aware inference
// schedule simulation.

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <format>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "petct/augment.hpp"
#include "petct/manifest.hpp"
#include "petct/metrics.hpp"
#include "petct/nifti.hpp"
#include "petct/postprocess.hpp"
#include "petct/predictors.hpp"
#include "petct/scheduler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PETCT_DATAKIT_SEED")) {
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec == std::errc() && ptr == text.data() + text.size()) return seed;
    std::cerr << "warning: ignoring non-numeric PETCT_DATAKIT_SEED\n";
  }
  return 0;
}

// Runs fn(case_index) over all cases, at most `jobs` at a time. Returns the
// messages of failed cases in index order. Each worker touches one case's
// volumes at a time, keeping memory bounded on whole-body scans.
std::vector<std::string> for_each_case(std::size_t case_count, unsigned jobs,
                                       const std::function<void(std::size_t)>& fn) {
  std::vector<std::string> errors(case_count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < case_count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::erase_if(errors, [](const std::string& e) { return e.empty(); });
  return errors;
}

int report_case_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << "\n";
  return errors.empty() ? kExitOk : kExitDataError;
}

petct::AugmentScheme resolve_scheme(const std::string& scheme_arg) {
  if (scheme_arg == "baseline") return petct::baseline_scheme();
  if (scheme_arg == "subtle") return petct::subtle_scheme();
  return petct::load_scheme(scheme_arg);
}

std::uint64_t derive_repeat_seed(std::uint64_t seed, std::uint64_t repeat) {
  return petct::RngStream::derive(seed, "repeat", repeat, 0).next_u64();
}

json provenance_json(const petct::AugmentResult& augmented,
                     const std::string& case_id, std::uint64_t repeat,
                     std::uint64_t seed, const std::string& scheme_name) {
  json transforms = json::array();
  for (const auto& rec : augmented.records) {
    json params = json::object();
    for (const auto& [key, value] : rec.sampled) params[key] = value;
    transforms.push_back({{"kind", petct::to_string(rec.kind)},
                          {"fired", rec.fired},
                          {"params", params}});
  }
  return json{{"case_id", case_id},
              {"repeat", repeat},
              {"seed", seed},
              {"scheme", scheme_name},
              {"transforms", transforms}};
}

int cmd_augment(const std::string& manifest_path, const std::string& scheme_arg,
                std::uint64_t seed, unsigned repeats, const fs::path& out_dir,
                unsigned jobs) {
  const petct::DatasetManifest manifest = petct::load_manifest(manifest_path);
  const petct::AugmentScheme scheme = resolve_scheme(scheme_arg);
  fs::create_directories(out_dir);

  const auto errors = for_each_case(manifest.cases.size(), jobs, [&](std::size_t i) {
    const auto& entry = manifest.cases[i];
    const petct::PetCtCase input = petct::load_case(manifest, entry);
    for (unsigned r = 0; r < repeats; ++r) {
      const std::uint64_t repeat_seed = derive_repeat_seed(seed, r);
      const petct::AugmentResult augmented =
          petct::apply_scheme_traced(input, scheme, repeat_seed);
      const std::string stem = std::format("{}_r{}", entry.case_id, r);
      petct::save_nifti(augmented.result.ct, out_dir / (stem + "_ct.nii.gz"));
      petct::save_nifti(augmented.result.pet, out_dir / (stem + "_pet.nii.gz"));
      if (augmented.result.label) {
        petct::save_nifti(*augmented.result.label, out_dir / (stem + "_label.nii.gz"));
      }
      std::ofstream prov(out_dir / (stem + "_augment.json"));
      prov << provenance_json(augmented, entry.case_id, r, repeat_seed, scheme.name)
                  .dump(2)
           << "\n";
    }
  });
  return report_case_errors(errors);
}

int cmd_postprocess_single(const fs::path& pred_path, const fs::path& pet_path,
                           double threshold, const fs::path& out_path) {
  const auto pred = petct::load_nifti(pred_path, petct::VolumeKind::kBinary);
  const auto pet = petct::load_nifti(pet_path, petct::VolumeKind::kSUV);
  petct::save_nifti(petct::suv_mask(pred, pet, threshold), out_path);
  return kExitOk;
}

int cmd_postprocess_batch(const fs::path& pred_dir, const std::string& manifest_path,
                          double threshold, const fs::path& out_dir, unsigned jobs) {
  const petct::DatasetManifest manifest = petct::load_manifest(manifest_path);
  fs::create_directories(out_dir);
  const auto errors = for_each_case(manifest.cases.size(), jobs, [&](std::size_t i) {
    const auto& entry = manifest.cases[i];
    const fs::path pred_path = pred_dir / (entry.case_id + ".nii.gz");
    if (!fs::exists(pred_path)) {
      throw std::runtime_error(
          std::format("case {}: missing prediction {}", entry.case_id, pred_path.string()));
    }
    const auto resolved_pet = manifest.resolve(entry.pet_path);
    if (!fs::exists(resolved_pet)) {
      throw std::runtime_error(
          std::format("case {}: missing PET {}", entry.case_id, resolved_pet.string()));
    }
    const auto pred = petct::load_nifti(pred_path, petct::VolumeKind::kBinary);
    const auto pet = petct::load_nifti(resolved_pet, petct::VolumeKind::kSUV);
    petct::save_nifti(petct::suv_mask(pred, pet, threshold),
                      out_dir / (entry.case_id + ".nii.gz"));
  });
  return report_case_errors(errors);
}

int cmd_evaluate(const fs::path& pred_dir, const std::string& manifest_path,
                 int connectivity, const fs::path& out_path,
                 const std::optional<fs::path>& csv_path, unsigned jobs) {
  const petct::DatasetManifest manifest = petct::load_manifest(manifest_path);
  const auto conn = petct::connectivity_from_int(connectivity);

  std::vector<std::optional<petct::CaseMetrics>> slots(manifest.cases.size());
  const auto errors = for_each_case(manifest.cases.size(), jobs, [&](std::size_t i) {
    const auto& entry = manifest.cases[i];
    if (!entry.label_path) {
      throw std::runtime_error(std::format("case {}: manifest has no label", entry.case_id));
    }
    const fs::path pred_path = pred_dir / (entry.case_id + ".nii.gz");
    const auto pred = petct::load_nifti(pred_path, petct::VolumeKind::kBinary);
    const auto gt = petct::load_nifti(manifest.resolve(*entry.label_path),
                                      petct::VolumeKind::kBinary);
    slots[i] = petct::evaluate_case(entry.case_id, entry.tracer, pred, gt, conn);
  });

  std::vector<petct::CaseMetrics> per_case;
  for (auto& slot : slots) {
    if (slot) per_case.push_back(std::move(*slot));
  }
  if (per_case.empty()) {
    std::cerr << "error: no case could be evaluated\n";
    return kExitDataError;
  }
  const petct::MetricsReport report = petct::aggregate(per_case);
  petct::save_report(report, out_path);
  if (csv_path) {
    std::ofstream csv(*csv_path);
    csv << petct::report_to_csv(report);
  }
  return report_case_errors(errors);
}

std::optional<std::vector<double>> parse_latency_spec(const std::string& spec) {
  std::vector<double> latencies;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) return std::nullopt;
      latencies.push_back(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (latencies.empty()) return std::nullopt;
  return latencies;
}

int cmd_schedule_sim(const std::string& latency_spec, const std::string& budget_path,
                     int n_predictors, const fs::path& out_path) {
  const auto latencies = parse_latency_spec(latency_spec);
  if (!latencies) {
    std::cerr << "usage error: --latency expects a positive constant or a "
                 "comma-separated list of per-pass seconds, got '"
              << latency_spec << "'\n";
    return kExitUsageError;
  }
  petct::SchedulerBudget budget;
  if (!budget_path.empty()) {
    std::ifstream in(budget_path);
    if (!in) {
      std::cerr << "error: cannot read budget config " << budget_path << "\n";
      return kExitDataError;
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    budget = petct::budget_from_json(text);
  }

  // Synthetic case + constant-output mocks; the scripted clock makes the
  // simulation wall-time independent.
  petct::PetCtCase cs;
  cs.case_id = "sim";
  cs.ct = petct::Volume3({8, 8, 4}, {2.0, 2.0, 3.0}, petct::VolumeKind::kHU, -1000.0);
  cs.pet = petct::Volume3({8, 8, 4}, {2.0, 2.0, 3.0}, petct::VolumeKind::kSUV, 0.0);

  petct::Volume3 blob({8, 8, 4}, {2.0, 2.0, 3.0}, petct::VolumeKind::kProb, 0.0);
  blob.at(4, 4, 2) = 1.0;

  petct::ScriptedClock clock;
  petct::ConstantOutputPredictor inner(blob);
  std::vector<std::unique_ptr<petct::ScriptedLatencyPredictor>> mocks;
  std::vector<petct::Predictor*> predictors;
  for (int m = 0; m < n_predictors; ++m) {
    mocks.push_back(std::make_unique<petct::ScriptedLatencyPredictor>(
        inner, *latencies, clock));
    predictors.push_back(mocks.back().get());
  }

  const petct::DynamicResult result =
      petct::run_dynamic_inference(cs, predictors, budget, clock);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write trace " << out_path << "\n";
    return kExitDataError;
  }
  out << petct::trace_to_json(result.trace);
  return kExitOk;
}

int cmd_manifest_scan(const fs::path& root, const std::string& default_tracer,
                      const fs::path& out_path) {
  const petct::DatasetManifest manifest =
      petct::scan_dataset_directory(root, petct::tracer_from_string(default_tracer));
  petct::save_manifest(manifest, out_path);
  std::cout << std::format("found {} cases under {}\n", manifest.cases.size(),
                           manifest.root.string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PET/CT data toolkit: augmentation, SUV postprocessing, "
               "evaluation, and deadline-aware inference scheduling"};
  app.require_subcommand(1);

  // augment
  std::string aug_manifest, aug_scheme;
  std::uint64_t aug_seed = default_seed();
  unsigned aug_repeats = 1, aug_jobs = 1;
  fs::path aug_out;
  auto* augment = app.add_subcommand("augment", "Apply an augmentation scheme to a dataset");
  augment->add_option("--manifest", aug_manifest, "Dataset manifest JSON")->required();
  augment->add_option("--scheme", aug_scheme,
                      "Scheme JSON path, or a preset name (baseline, subtle)")
      ->required();
  augment->add_option("--seed", aug_seed, "Base RNG seed (default: $PETCT_DATAKIT_SEED or 0)");
  augment->add_option("--repeats", aug_repeats, "Augmented copies per case")
      ->check(CLI::PositiveNumber);
  augment->add_option("--out", aug_out, "Output directory")->required();
  augment->add_option("--jobs", aug_jobs, "Parallel worker threads")->check(CLI::PositiveNumber);

  // postprocess
  std::string pp_manifest;
  fs::path pp_pred, pp_pet, pp_out;
  double pp_threshold = 1.0;
  unsigned pp_jobs = 1;
  auto* postprocess = app.add_subcommand(
      "postprocess", "Mask predictions where the PET uptake is below a threshold");
  postprocess->add_option("--pred", pp_pred,
                          "Prediction NIfTI (with --pet) or directory (with --manifest)")
      ->required();
  postprocess->add_option("--pet", pp_pet, "PET NIfTI for single-file mode");
  postprocess->add_option("--manifest", pp_manifest, "Dataset manifest JSON for batch mode");
  postprocess->add_option("--threshold", pp_threshold, "Uptake threshold (default 1.0)");
  postprocess->add_option("--out", pp_out, "Output NIfTI (single) or directory (batch)")
      ->required();
  postprocess->add_option("--jobs", pp_jobs, "Parallel worker threads")->check(CLI::PositiveNumber);

  // evaluate
  std::string ev_manifest;
  fs::path ev_pred, ev_out, ev_csv;
  int ev_connectivity = 26;
  unsigned ev_jobs = 1;
  auto* evaluate = app.add_subcommand("evaluate", "Compute Dice / FPvol / FNvol against labels");
  evaluate->add_option("--pred", ev_pred, "Directory of <case_id>.nii.gz predictions")->required();
  evaluate->add_option("--manifest", ev_manifest, "Dataset manifest JSON")->required();
  evaluate->add_option("--connectivity", ev_connectivity, "Component connectivity: 6, 18 or 26")
      ->check(CLI::IsMember({6, 18, 26}));
  evaluate->add_option("--out", ev_out, "Report JSON output path")->required();
  evaluate->add_option("--csv", ev_csv, "Optional per-case CSV output path");
  evaluate->add_option("--jobs", ev_jobs, "Parallel worker threads")->check(CLI::PositiveNumber);

  // schedule-sim
  std::string sim_latency, sim_budget;
  int sim_models = 5;
  fs::path sim_out;
  auto* schedule_sim = app.add_subcommand(
      "schedule-sim", "Simulate dynamic ensembling/TTA under synthetic latencies");
  schedule_sim->add_option("--latency", sim_latency,
                           "Per-pass seconds: constant (e.g. 5) or list (e.g. 5,7,9)")
      ->required();
  schedule_sim->add_option("--budget", sim_budget, "Budget config JSON (defaults if omitted)");
  schedule_sim->add_option("--models", sim_models, "Number of available mock models")
      ->check(CLI::PositiveNumber);
  schedule_sim->add_option("--out", sim_out, "Trace JSON output path")->required();

  // manifest scan
  auto* manifest_cmd = app.add_subcommand("manifest", "Dataset manifest helpers");
  manifest_cmd->require_subcommand(1);
  fs::path scan_root, scan_out;
  std::string scan_tracer = "FDG";
  auto* scan = manifest_cmd->add_subcommand(
      "scan", "Generate a manifest from <case_id>_{ct,pet,label}.nii.gz files");
  scan->add_option("--root", scan_root, "Dataset directory")->required();
  scan->add_option("--default-tracer", scan_tracer, "Tracer when the id names none")
      ->check(CLI::IsMember({"FDG", "PSMA"}));
  scan->add_option("--out", scan_out, "Manifest JSON output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  try {
    if (augment->parsed()) {
      return cmd_augment(aug_manifest, aug_scheme, aug_seed, aug_repeats, aug_out, aug_jobs);
    }
    if (postprocess->parsed()) {
      const bool single = !pp_pet.empty();
      const bool batch = !pp_manifest.empty();
      if (single == batch) {
        std::cerr << "usage error: postprocess needs exactly one of --pet or --manifest\n";
        return kExitUsageError;
      }
      return single ? cmd_postprocess_single(pp_pred, pp_pet, pp_threshold, pp_out)
                    : cmd_postprocess_batch(pp_pred, pp_manifest, pp_threshold, pp_out, pp_jobs);
    }
    if (evaluate->parsed()) {
      std::optional<fs::path> csv;
      if (!ev_csv.empty()) csv = ev_csv;
      return cmd_evaluate(ev_pred, ev_manifest, ev_connectivity, ev_out, csv, ev_jobs);
    }
    if (schedule_sim->parsed()) {
      return cmd_schedule_sim(sim_latency, sim_budget, sim_models, sim_out);
    }
    if (manifest_cmd->parsed() && scan->parsed()) {
      return cmd_manifest_scan(scan_root, scan_tracer, scan_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsageError;
}
