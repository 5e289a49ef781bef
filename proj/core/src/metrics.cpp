#include "petct/metrics.hpp"

#include <format>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace petct {

namespace {

void require_same_grid(const Volume3& pred, const Volume3& gt, const char* op) {
  if (!pred.same_grid(gt)) {
    throw std::invalid_argument(std::string(op) + ": prediction and ground-truth grids differ");
  }
  if (pred.kind != VolumeKind::kBinary || gt.kind != VolumeKind::kBinary) {
    throw std::invalid_argument(std::string(op) + ": both volumes must be BINARY");
  }
}

// Sum of mL over source components with no voxel overlapping `other`.
double unmatched_component_volume_ml(const Volume3& source, const Volume3& other,
                                     Connectivity conn) {
  const ComponentLabeling labeling = connected_components(source, conn);
  std::vector<char> overlapped(static_cast<std::size_t>(labeling.component_count) + 1, 0);
  for (std::size_t i = 0; i < other.data.size(); ++i) {
    if (other.data[i] != 0.0 && labeling.labels[i] != 0) {
      overlapped[static_cast<std::size_t>(labeling.labels[i])] = 1;
    }
  }
  std::size_t unmatched_voxels = 0;
  for (std::int32_t label = 1; label <= labeling.component_count; ++label) {
    if (!overlapped[static_cast<std::size_t>(label)]) {
      unmatched_voxels += labeling.count_of(label);
    }
  }
  return volume_ml(unmatched_voxels, source.spacing);
}

}  // namespace

double dice(const Volume3& pred, const Volume3& gt) {
  require_same_grid(pred, gt, "dice");
  std::size_t p = 0, g = 0, both = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const bool in_p = pred.data[i] != 0.0;
    const bool in_g = gt.data[i] != 0.0;
    p += in_p;
    g += in_g;
    both += in_p && in_g;
  }
  if (p + g == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(p + g);
}

double false_positive_volume_ml(const Volume3& pred, const Volume3& gt,
                                Connectivity conn) {
  require_same_grid(pred, gt, "false_positive_volume_ml");
  return unmatched_component_volume_ml(pred, gt, conn);
}

double false_negative_volume_ml(const Volume3& pred, const Volume3& gt,
                                Connectivity conn) {
  require_same_grid(pred, gt, "false_negative_volume_ml");
  return unmatched_component_volume_ml(gt, pred, conn);
}

CaseMetrics evaluate_case(const std::string& case_id, Tracer tracer,
                          const Volume3& pred, const Volume3& gt,
                          Connectivity conn) {
  return CaseMetrics{case_id, tracer, dice(pred, gt),
                     false_positive_volume_ml(pred, gt, conn),
                     false_negative_volume_ml(pred, gt, conn)};
}

MetricsReport aggregate(const std::vector<CaseMetrics>& per_case) {
  if (per_case.empty()) {
    throw std::invalid_argument("aggregate: no case metrics given");
  }
  MetricsReport report;
  report.per_case = per_case;

  double dice_sum = 0.0, fp_sum = 0.0, fn_sum = 0.0;
  double fdg_sum = 0.0, psma_sum = 0.0;
  std::size_t n_fdg = 0, n_psma = 0;
  for (const auto& m : per_case) {
    dice_sum += m.dice;
    fp_sum += m.fp_vol_ml;
    fn_sum += m.fn_vol_ml;
    if (m.tracer == Tracer::kFDG) {
      fdg_sum += m.dice;
      ++n_fdg;
    } else {
      psma_sum += m.dice;
      ++n_psma;
    }
  }
  const double n = static_cast<double>(per_case.size());
  report.dice_mean = dice_sum / n;
  report.fp_vol_mean_ml = fp_sum / n;
  report.fn_vol_mean_ml = fn_sum / n;
  if (n_fdg > 0) report.dice_fdg = fdg_sum / static_cast<double>(n_fdg);
  if (n_psma > 0) report.dice_psma = psma_sum / static_cast<double>(n_psma);

  if (report.dice_fdg && report.dice_psma) {
    report.dice_balanced = 0.5 * *report.dice_fdg + 0.5 * *report.dice_psma;
  } else {
    report.single_tracer = true;
    report.dice_balanced = report.dice_fdg.value_or(report.dice_psma.value_or(0.0));
  }
  return report;
}

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  json j;
  j["per_case"] = json::array();
  for (const auto& m : report.per_case) {
    j["per_case"].push_back({{"case_id", m.case_id},
                             {"tracer", to_string(m.tracer)},
                             {"dice", m.dice},
                             {"fp_vol_ml", m.fp_vol_ml},
                             {"fn_vol_ml", m.fn_vol_ml}});
  }
  j["summary"] = {{"dice_fdg", optional_to_json(report.dice_fdg)},
                  {"dice_psma", optional_to_json(report.dice_psma)},
                  {"dice_mean", report.dice_mean},
                  {"dice_balanced", report.dice_balanced},
                  {"fp_vol_mean_ml", report.fp_vol_mean_ml},
                  {"fn_vol_mean_ml", report.fn_vol_mean_ml},
                  {"single_tracer", report.single_tracer}};
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("metrics report: ") + e.what());
  }
  MetricsReport report;
  for (const auto& jm : j.at("per_case")) {
    report.per_case.push_back(
        CaseMetrics{jm.at("case_id").get<std::string>(),
                    tracer_from_string(jm.at("tracer").get<std::string>()),
                    jm.at("dice").get<double>(),
                    jm.at("fp_vol_ml").get<double>(),
                    jm.at("fn_vol_ml").get<double>()});
  }
  const json& s = j.at("summary");
  report.dice_fdg = optional_from_json(s.at("dice_fdg"));
  report.dice_psma = optional_from_json(s.at("dice_psma"));
  report.dice_mean = s.at("dice_mean").get<double>();
  report.dice_balanced = s.at("dice_balanced").get<double>();
  report.fp_vol_mean_ml = s.at("fp_vol_mean_ml").get<double>();
  report.fn_vol_mean_ml = s.at("fn_vol_mean_ml").get<double>();
  report.single_tracer = s.value("single_tracer", false);
  return report;
}

std::string report_to_csv(const MetricsReport& report) {
  std::string csv = "case_id,tracer,dice,fp_vol_ml,fn_vol_ml\n";
  for (const auto& m : report.per_case) {
    csv += std::format("{},{},{},{},{}\n", m.case_id, to_string(m.tracer),
                       m.dice, m.fp_vol_ml, m.fn_vol_ml);
  }
  return csv;
}

void save_report(const MetricsReport& report, const std::filesystem::path& json_path) {
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot write report: " + json_path.string());
  out << report_to_json(report);
}

MetricsReport load_report(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot read report: " + json_path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return report_from_json(text);
}

}  // namespace petct
