#include "lakeice/data/observation.hpp"

namespace lakeice {

SensorObservation pad_to_patch(const CleanPixelValues& input, SensorKind kind,
                               Date date, std::string lake_id) {
  const SensorTraits t = traits(kind);
  const Mask& clean = *input.clean;
  const int n_clean = clean.count();
  if (n_clean == 0) throw DataError("no clean pixels");
  if (clean.height > t.patch_height || clean.width > t.patch_width)
    throw DataError("lake too large for patch");
  if (input.values.rows() != n_clean || input.values.cols() != t.channels)
    throw ContractError("pad_to_patch: value block shape mismatch");

  SensorObservation obs;
  obs.sensor = kind;
  obs.date = date;
  obs.lake_id = std::move(lake_id);
  obs.values = GridTensor<float>(t.patch_height, t.patch_width, t.channels);
  obs.valid = Mask(t.patch_height, t.patch_width);

  int row = 0;
  int n_valid = 0;
  for (int y = 0; y < clean.height; ++y) {
    for (int x = 0; x < clean.width; ++x) {
      if (!clean.at(y, x)) continue;
      obs.values.values.row(obs.values.index(y, x)) = input.values.row(row);
      const bool usable = input.cloudfree.empty() || input.cloudfree[row] != 0;
      obs.valid.set(y, x, usable);
      n_valid += usable ? 1 : 0;
      ++row;
    }
  }
  obs.cloud_free_fraction = static_cast<double>(n_valid) / n_clean;
  return obs;
}

bool filter_by_cloud_fraction(const SensorObservation& obs, double threshold) {
  if (obs.sensor == SensorKind::SAR) return true;
  return obs.cloud_free_fraction > threshold;
}

}  // namespace lakeice
