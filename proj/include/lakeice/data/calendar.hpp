#pragma once

#include <map>
#include <vector>

#include "lakeice/core/date.hpp"
#include "lakeice/core/sensor.hpp"

namespace lakeice {

// Per-sensor sorted lists of usable acquisition dates within one season.
struct AcquisitionCalendar {
  Date season_start;
  Date season_end;
  std::map<SensorKind, std::vector<Date>> dates;

  void add(SensorKind k, Date d);
  void validate() const;  // strictly increasing lists inside the window
};

// Mean number of days between usable acquisitions over the deduplicated
// union of the selected sensors' dates: (last - first) / (n - 1). A day
// imaged by more than one satellite is counted once.
double effective_temporal_resolution(const AcquisitionCalendar& cal,
                                     const std::vector<SensorKind>& sensors);

}  // namespace lakeice
