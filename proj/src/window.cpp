#include "lakeice/pipeline/window.hpp"

#include <algorithm>
#include <cstdlib>

namespace lakeice {

void EmbeddingSeries::add(Embedding e) {
  items.push_back(std::move(e));
  std::stable_sort(items.begin(), items.end(),
                   [](const Embedding& a, const Embedding& b) {
                     if (a.date != b.date) return a.date < b.date;
                     return slot_priority(a.sensor) < slot_priority(b.sensor);
                   });
}

std::vector<Date> EmbeddingSeries::distinct_dates() const {
  std::vector<Date> dates;
  for (const auto& e : items)
    if (dates.empty() || dates.back() < e.date) dates.push_back(e.date);
  return dates;
}

namespace {

// Best embedding for a nominal date: minimal |date - nominal|, ties to the
// earlier date; within a day the series is already priority-sorted.
int best_index_for(const EmbeddingSeries& series, Date nominal) {
  int best = -1;
  std::int64_t best_dist = 0;
  for (int i = 0; i < static_cast<int>(series.items.size()); ++i) {
    const Date d = series.items[i].date;
    const std::int64_t dist = std::llabs(d - nominal);
    if (best < 0 || dist < best_dist ||
        (dist == best_dist && d < series.items[best].date)) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace

EmbeddingWindow build_window(const EmbeddingSeries& series, Date center,
                             int size) {
  if (series.empty()) throw DataError("build_window: empty embedding series");
  if (size < 1 || size % 2 == 0)
    throw ContractError("build_window: window size must be odd");

  EmbeddingWindow w;
  w.center = center;
  const int half = size / 2;
  for (int off = -half; off <= half; ++off) {
    const Date nominal = center + off;
    WindowSlot slot;
    slot.nominal_offset = off;
    slot.series_index = best_index_for(series, nominal);
    slot.gap_filled = series.items[slot.series_index].date != nominal;
    w.slots.push_back(slot);
  }
  return w;
}

EmbeddingWindow build_window_pinned(const EmbeddingSeries& series,
                                    int center_index, int size) {
  if (center_index < 0 || center_index >= static_cast<int>(series.items.size()))
    throw ContractError("build_window_pinned: bad center index");
  EmbeddingWindow w = build_window(series, series.items[center_index].date, size);
  WindowSlot& center = w.slots[w.slots.size() / 2];
  center.series_index = center_index;
  center.gap_filled = false;
  return w;
}

std::vector<GridTensor<float>> window_tensors(const EmbeddingSeries& series,
                                              const EmbeddingWindow& window) {
  std::vector<GridTensor<float>> out;
  out.reserve(window.slots.size());
  for (const auto& slot : window.slots)
    out.push_back(series.items[slot.series_index].values);
  return out;
}

DailyPrediction fuse_daily(const std::vector<ObservationPrediction>& preds) {
  if (preds.empty()) throw DataError("fuse_daily: no predictions");
  DailyPrediction d;
  d.date = preds.front().date;
  double sum = 0;
  for (const auto& p : preds) {
    if (p.date != d.date) throw ContractError("fuse_daily: mixed dates");
    d.per_observation.push_back(p);
    sum += p.value;
  }
  d.fused = sum / static_cast<double>(preds.size());
  return d;
}

}  // namespace lakeice
