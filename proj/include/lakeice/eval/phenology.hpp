#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lakeice/core/date.hpp"

namespace lakeice {

// Dated sequence of open-water fractions (labels or predictions).
struct WaterFractionSeries {
  std::string lake_id;
  std::string winter_id;
  std::string source;  // "label" | "prediction" | "ensemble-mean"
  std::vector<std::pair<Date, double>> points;  // strictly increasing dates

  void add(Date d, double fraction);
};

// Ice-on: first date with fraction below the threshold whose next
// available observation stays below it. Ice-off: first date after ice-on
// with fraction above the threshold whose next observation stays above.
struct PhenologyEvents {
  std::optional<Date> ice_on;
  std::optional<Date> ice_off;
  double threshold = 0.3;
  std::vector<Date> ice_on_candidates;   // persistent crossings, earliest first
  std::vector<Date> ice_off_candidates;
};

PhenologyEvents extract_ice_dates(const WaterFractionSeries& series,
                                  double threshold);

// Reference events may be date ranges (e.g. "15-17 Dec").
struct DateRange {
  Date first;
  Date last;  // == first for a single-day reference
};

struct EventComparison {
  bool detected = false;
  bool reference_known = false;
  long offset_days = 0;  // signed, to the nearest range endpoint, 0 inside
  bool gcos_pass = false;  // |offset| <= 2 days
};

EventComparison compare_event(const std::optional<Date>& predicted,
                              const std::optional<DateRange>& reference);

}  // namespace lakeice
