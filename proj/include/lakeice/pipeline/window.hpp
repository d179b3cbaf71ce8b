#pragma once

#include <vector>

#include "lakeice/nn/fusion_model.hpp"

namespace lakeice {

// Embeddings of one lake-winter, sorted by (date, slot priority).
struct EmbeddingSeries {
  std::vector<Embedding> items;

  void add(Embedding e);
  bool empty() const { return items.empty(); }
  std::vector<Date> distinct_dates() const;
};

struct WindowSlot {
  int nominal_offset = 0;  // -3..+3 for the default window of 7
  int series_index = -1;   // embedding used for this slot
  bool gap_filled = false;  // actual date != nominal date
};

// A sliding window of adjacent days around a center date. Slots hold the
// embedding whose date is closest to the nominal day (ties to the earlier
// date); same-day duplicates resolve by SAR > VIIRS > MODIS.
struct EmbeddingWindow {
  Date center;
  std::vector<WindowSlot> slots;
};

EmbeddingWindow build_window(const EmbeddingSeries& series, Date center,
                             int size = 7);

// Same nearest-date fill, but the center slot is pinned to one specific
// observation, so each same-day duplicate yields its own prediction.
EmbeddingWindow build_window_pinned(const EmbeddingSeries& series,
                                    int center_index, int size = 7);

std::vector<GridTensor<float>> window_tensors(const EmbeddingSeries& series,
                                              const EmbeddingWindow& window);

// One scalar prediction per satellite observation of a day, fused by the
// arithmetic mean.
struct ObservationPrediction {
  SensorKind sensor = SensorKind::MODIS;
  Date date;
  double value = 0;
};

struct DailyPrediction {
  Date date;
  std::vector<ObservationPrediction> per_observation;
  double fused = 0;
  double ensemble_mean = 0;
  double ensemble_std = 0;
  bool has_ensemble = false;
};

DailyPrediction fuse_daily(const std::vector<ObservationPrediction>& preds);

}  // namespace lakeice
