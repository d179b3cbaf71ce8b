#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lakeice/data/calendar.hpp"
#include "lakeice/eval/phenology.hpp"
#include "lakeice/pipeline/window.hpp"
#include "lakeice/train/ensemble.hpp"

namespace lakeice {

// Per-sensor mAcc / mIoU (mu, sigma) text table.
std::string metrics_report(const std::map<SensorKind, MetricStat>& macc,
                           const std::map<SensorKind, MetricStat>& miou,
                           const std::string& title);

// Effective temporal resolution per sensor and for the combination.
std::string temporal_resolution_report(
    const std::vector<std::pair<std::string, AcquisitionCalendar>>& rows);

struct PhenologyReportRow {
  std::string lake_id;
  std::string winter_id;
  std::string event;  // "ice-on" | "ice-off"
  std::optional<DateRange> reference;
  std::optional<Date> predicted_low;   // threshold 0.1
  std::optional<Date> predicted_high;  // threshold 0.3
  std::vector<Date> candidates_low;
  std::vector<Date> candidates_high;
  EventComparison cmp_low;
  EventComparison cmp_high;
};

std::string phenology_report(const std::vector<PhenologyReportRow>& rows);

// Per-day prediction table: date, per-sensor predictions (empty when
// absent), fused value, ensemble mean/std.
void write_prediction_csv(const std::filesystem::path& file,
                          const std::vector<DailyPrediction>& daily);

// Every CLI run drops one of these next to its outputs.
void write_run_manifest(const std::filesystem::path& dir,
                        const std::string& command,
                        const std::string& config_hash, std::uint64_t seed);

}  // namespace lakeice
