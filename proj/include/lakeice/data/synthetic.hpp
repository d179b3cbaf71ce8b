#pragma once

#include <cstdint>
#include <vector>

#include "lakeice/data/dataset.hpp"

namespace lakeice {

// Configuration of one synthetic lake-winter season with known ground
// truth. The true water fraction follows a double sigmoid (1 -> 0 around
// freeze-up, 0 -> 1 around break-up); per-pixel freeze states come from a
// spatially correlated threshold field so transition days show coherent
// partial cover.
struct SyntheticSeasonConfig {
  std::uint64_t seed = 1;
  std::string lake_id = "sihl";
  std::string winter_id = "2016-17";
  Date season_start{2016, 10, 1};
  Date season_end{2017, 5, 28};
  Date freeze_center{2017, 1, 5};
  Date breakup_center{2017, 4, 2};
  double freeze_steepness = 2.0;   // sigmoid scale in days
  double breakup_steepness = 2.5;
  double optical_noise = 0.05;     // additive Gaussian sigma
  double sar_noise = 0.02;         // additive on top of speckle
  double modis_cloud_prob = 0.35;  // P(optical day fully cloudy -> dropped)
  double viirs_cloud_prob = 0.35;
  int modis_revisit = 1;  // days between acquisitions
  int viirs_revisit = 1;
  int sar_revisit = 4;    // SAR is never cloud-dropped
  Polygon outline;        // lake shape in optical-grid units; default if empty

  void validate() const;
};

// True (label) water fraction for one day, evaluated directly from the
// config's sigmoid + threshold field. Used as the generator's ground truth.
double synthetic_true_fraction(const SyntheticSeasonConfig& cfg, Date day);

LakeWinter generate_synthetic_season(const SyntheticSeasonConfig& cfg);

// Multi-lake, multi-winter dataset mirroring the published study layout:
// four lakes of decreasing size over two winters. Per lake-winter seeds,
// freeze/break-up jitter and season windows are derived deterministically.
struct SyntheticDatasetConfig {
  std::uint64_t seed = 20170101;
  std::vector<std::string> winters = {"2016-17", "2017-18"};
  std::vector<std::string> lakes = {"sihl", "sils", "silvaplana", "stmoritz"};
  double optical_noise = 0.05;
  double sar_noise = 0.02;
  double cloud_prob = 0.35;
  int sar_revisit = 4;
  int season_days = 240;          // total window length
  int freeze_center_day = 96;     // offset from season start
  int breakup_center_day = 183;
  int phenology_jitter = 6;       // max |jitter| in days per lake-winter
};

Polygon default_lake_outline(const std::string& lake_id);

SyntheticSeasonConfig season_config_for(const SyntheticDatasetConfig& cfg,
                                        const std::string& lake,
                                        const std::string& winter);

Dataset generate_synthetic_dataset(const SyntheticDatasetConfig& cfg);

}  // namespace lakeice
