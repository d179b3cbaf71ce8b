#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lakeice/core/date.hpp"
#include "lakeice/core/grid.hpp"
#include "lakeice/core/sensor.hpp"

namespace lakeice {

// One dated acquisition from one sensor, already shaped to the sensor's
// patch size. valid marks clean AND cloud-free pixels; it is false on every
// background (padding) pixel.
struct SensorObservation {
  SensorKind sensor = SensorKind::MODIS;
  Date date;
  std::string lake_id;
  GridTensor<float> values;
  Mask valid;
  double cloud_free_fraction = 0.0;  // valid pixels / clean pixels
};

// Per-day reference state. Per-pixel labels exist only on non-transition
// days (the lake is then entirely frozen or entirely non-frozen).
struct DayLabel {
  Date date;
  double water_fraction = 0.0;  // {0,.25,.75,1} real data; any [0,1] synthetic
  bool is_transition = false;
  std::optional<LabelGrid> per_pixel;  // optical-grid resolution
};

// Values sampled on the clean pixels of a grid, in row-major pixel order.
struct CleanPixelValues {
  const Mask* clean = nullptr;
  MatX<float> values;                 // (#clean) x channels
  std::vector<std::uint8_t> cloudfree;  // per clean pixel, 1 = usable
};

// Places clean-pixel values at their grid positions and fills everything
// else with the background value 0. valid ends up as clean AND cloud-free.
SensorObservation pad_to_patch(const CleanPixelValues& input, SensorKind kind,
                               Date date, std::string lake_id);

// Keep iff cloud_free_fraction > threshold (strict). SAR is always kept.
bool filter_by_cloud_fraction(const SensorObservation& obs,
                              double threshold = 0.3);

}  // namespace lakeice
