#ifndef PETCT_METRICS_HPP
#define PETCT_METRICS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "petct/case.hpp"
#include "petct/components.hpp"
#include "petct/volume.hpp"

namespace petct {

struct CaseMetrics {
  std::string case_id;
  Tracer tracer = Tracer::kFDG;
  double dice = 0.0;
  double fp_vol_ml = 0.0;
  double fn_vol_ml = 0.0;

  bool operator==(const CaseMetrics&) const = default;
};

/// Aggregated evaluation. Dice values are fractions in [0, 1]; volumes in
/// mL. dice_balanced weights the per-tracer means equally, simulating a
/// 50/50 FDG/PSMA mix; with a single tracer present it falls back to that
/// tracer's mean and single_tracer is flagged.
struct MetricsReport {
  std::vector<CaseMetrics> per_case;
  std::optional<double> dice_fdg;
  std::optional<double> dice_psma;
  double dice_mean = 0.0;
  double dice_balanced = 0.0;
  double fp_vol_mean_ml = 0.0;
  double fn_vol_mean_ml = 0.0;
  bool single_tracer = false;

  bool operator==(const MetricsReport&) const = default;
};

/// 2|P&G| / (|P|+|G|). Both masks empty -> 1.0; empty ground truth with a
/// non-empty prediction -> 0.0.
double dice(const Volume3& pred, const Volume3& gt);

/// Total mL of predicted components sharing no voxel with the ground truth.
double false_positive_volume_ml(const Volume3& pred, const Volume3& gt,
                                Connectivity conn = Connectivity::k26);

/// Total mL of ground-truth components sharing no voxel with the prediction.
double false_negative_volume_ml(const Volume3& pred, const Volume3& gt,
                                Connectivity conn = Connectivity::k26);

CaseMetrics evaluate_case(const std::string& case_id, Tracer tracer,
                          const Volume3& pred, const Volume3& gt,
                          Connectivity conn = Connectivity::k26);

/// Per-tracer means, unweighted mean, balanced mean, FP/FN volume means.
/// Throws std::invalid_argument on an empty list.
MetricsReport aggregate(const std::vector<CaseMetrics>& per_case);

// Report JSON: {"per_case": [...], "summary": {...}}; CSV is one row per case.
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);
std::string report_to_csv(const MetricsReport& report);
void save_report(const MetricsReport& report, const std::filesystem::path& json_path);
MetricsReport load_report(const std::filesystem::path& json_path);

}  // namespace petct

#endif  // PETCT_METRICS_HPP
