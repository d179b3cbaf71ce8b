#pragma once

#include <array>
#include <string>

#include "lakeice/core/error.hpp"

namespace lakeice {

enum class SensorKind { MODIS, VIIRS, SAR };

struct SensorTraits {
  int channels;
  int patch_height;
  int patch_width;
  bool optical;  // optical sensors are cloud-affected, SAR is not
};

// MODIS 12x12x12, VIIRS 12x12x5, SAR 128x128x2.
inline SensorTraits traits(SensorKind k) {
  switch (k) {
    case SensorKind::MODIS: return {12, 12, 12, true};
    case SensorKind::VIIRS: return {5, 12, 12, true};
    case SensorKind::SAR: return {2, 128, 128, false};
  }
  throw ContractError("unknown sensor kind");
}

inline std::string to_string(SensorKind k) {
  switch (k) {
    case SensorKind::MODIS: return "MODIS";
    case SensorKind::VIIRS: return "VIIRS";
    case SensorKind::SAR: return "SAR";
  }
  throw ContractError("unknown sensor kind");
}

inline SensorKind sensor_from_string(const std::string& s) {
  if (s == "MODIS") return SensorKind::MODIS;
  if (s == "VIIRS") return SensorKind::VIIRS;
  if (s == "SAR") return SensorKind::SAR;
  throw DataError("unknown sensor name '" + s + "'");
}

inline constexpr std::array<SensorKind, 3> kAllSensors = {
    SensorKind::MODIS, SensorKind::VIIRS, SensorKind::SAR};

// Slot-filling priority when several sensors imaged the same day:
// SAR beats VIIRS beats MODIS (descending spatial information).
inline int slot_priority(SensorKind k) {
  switch (k) {
    case SensorKind::SAR: return 0;
    case SensorKind::VIIRS: return 1;
    case SensorKind::MODIS: return 2;
  }
  return 3;
}

}  // namespace lakeice
