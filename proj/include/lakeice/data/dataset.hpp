#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lakeice/data/calendar.hpp"
#include "lakeice/data/geometry.hpp"
#include "lakeice/data/observation.hpp"

namespace lakeice {

// All data for one lake in one winter: kept (cloud-filtered) observations,
// daily reference labels, geometry.
struct LakeWinter {
  std::string lake_id;
  std::string winter_id;
  Date season_start;
  Date season_end;
  LakeGeometry geometry;
  std::vector<SensorObservation> observations;  // sorted by (date, sensor)
  std::map<Date, DayLabel> labels;

  AcquisitionCalendar calendar() const;
  const DayLabel* label_at(Date d) const;

  // Class map for a non-transition day at optical or SAR resolution.
  LabelGrid rasterize_label(Date d, bool sar_resolution) const;

  const Mask& clean_mask(SensorKind k) const {
    return k == SensorKind::SAR ? geometry.clean_sar : geometry.clean_optical;
  }
};

struct Dataset {
  std::vector<LakeWinter> items;

  std::vector<std::string> lake_ids() const;
  std::vector<std::string> winter_ids() const;
  const LakeWinter* find(const std::string& lake,
                         const std::string& winter) const;
};

// On-disk layout: one directory per lake per winter holding manifest.json,
// LIF1 array payloads for observations/masks, and per-day label grids.
void save_dataset(const Dataset& ds, const std::filesystem::path& root);
Dataset load_dataset(const std::filesystem::path& root);

}  // namespace lakeice
