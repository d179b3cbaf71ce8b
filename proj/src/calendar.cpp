#include "lakeice/data/calendar.hpp"

#include <algorithm>

#include "lakeice/core/error.hpp"

namespace lakeice {

void AcquisitionCalendar::add(SensorKind k, Date d) {
  auto& list = dates[k];
  if (!list.empty() && !(list.back() < d))
    throw DataError("calendar dates must be strictly increasing");
  list.push_back(d);
}

void AcquisitionCalendar::validate() const {
  for (const auto& [k, list] : dates) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] < season_start || season_end < list[i])
        throw DataError("calendar date outside season window");
      if (i > 0 && !(list[i - 1] < list[i]))
        throw DataError("calendar dates must be strictly increasing");
    }
  }
}

double effective_temporal_resolution(const AcquisitionCalendar& cal,
                                     const std::vector<SensorKind>& sensors) {
  std::vector<Date> all;
  for (SensorKind k : sensors) {
    auto it = cal.dates.find(k);
    if (it == cal.dates.end()) continue;
    all.insert(all.end(), it->second.begin(), it->second.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() < 2) throw DataError("insufficient acquisitions");
  return static_cast<double>(all.back() - all.front()) /
         static_cast<double>(all.size() - 1);
}

}  // namespace lakeice
