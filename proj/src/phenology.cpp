#include "lakeice/eval/phenology.hpp"

#include <cmath>

#include "lakeice/core/error.hpp"

namespace lakeice {

void WaterFractionSeries::add(Date d, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw DataError("water fraction outside [0,1]");
  if (!points.empty() && !(points.back().first < d))
    throw DataError("series dates must be strictly increasing");
  points.emplace_back(d, fraction);
}

PhenologyEvents extract_ice_dates(const WaterFractionSeries& series,
                                  double threshold) {
  const auto& pts = series.points;
  if (pts.size() < 2) throw DataError("extract_ice_dates: need >= 2 observations");

  PhenologyEvents ev;
  ev.threshold = threshold;

  // Persistent downward crossings: below threshold here and at the next
  // available observation, coming from a non-below state (or series start).
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const bool below = pts[i].second < threshold;
    const bool next_below = pts[i + 1].second < threshold;
    const bool prev_below = i > 0 && pts[i - 1].second < threshold;
    if (below && next_below && !prev_below)
      ev.ice_on_candidates.push_back(pts[i].first);
  }
  if (!ev.ice_on_candidates.empty()) ev.ice_on = ev.ice_on_candidates.front();

  if (ev.ice_on) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!(*ev.ice_on < pts[i].first)) continue;
      const bool above = pts[i].second > threshold;
      const bool next_above = pts[i + 1].second > threshold;
      const bool prev_above = i > 0 && pts[i - 1].second > threshold &&
                              *ev.ice_on < pts[i - 1].first;
      if (above && next_above && !prev_above)
        ev.ice_off_candidates.push_back(pts[i].first);
    }
    if (!ev.ice_off_candidates.empty())
      ev.ice_off = ev.ice_off_candidates.front();
  }
  if (ev.ice_on && ev.ice_off && !(*ev.ice_on < *ev.ice_off))
    throw ContractError("ice-on must precede ice-off");
  return ev;
}

EventComparison compare_event(const std::optional<Date>& predicted,
                              const std::optional<DateRange>& reference) {
  EventComparison cmp;
  cmp.detected = predicted.has_value();
  cmp.reference_known = reference.has_value();
  if (!cmp.detected || !cmp.reference_known) return cmp;

  const Date p = *predicted;
  if (!(p < reference->first) && !(reference->last < p)) {
    cmp.offset_days = 0;
  } else if (p < reference->first) {
    cmp.offset_days = p - reference->first;  // negative: early
  } else {
    cmp.offset_days = p - reference->last;  // positive: late
  }
  cmp.gcos_pass = std::abs(cmp.offset_days) <= 2;
  return cmp;
}

}  // namespace lakeice
