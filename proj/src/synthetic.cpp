#include "lakeice/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lakeice/core/hash.hpp"

namespace lakeice {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Smooth random threshold field: a few low-frequency cosine waves,
// clamped into (0,1) so deep winter freezes every pixel and late spring
// thaws every pixel.
struct ThresholdField {
  static constexpr int kWaves = 6;
  double fx[kWaves], fy[kWaves], phase[kWaves];

  explicit ThresholdField(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> wavelength(4.0, 14.0);
    for (int k = 0; k < kWaves; ++k) {
      const double dir = angle(rng);
      const double f = 1.0 / wavelength(rng);
      fx[k] = f * std::cos(dir);
      fy[k] = f * std::sin(dir);
      phase[k] = angle(rng);
    }
  }

  double threshold(double x, double y) const {
    double g = 0;
    for (int k = 0; k < kWaves; ++k)
      g += std::cos(2.0 * kPi * (fx[k] * x + fy[k] * y) + phase[k]);
    g /= std::sqrt(kWaves / 2.0);  // roughly unit variance
    return std::clamp(0.5 + 0.22 * g, 0.15, 0.85);
  }
};

double freeze_level(const SyntheticSeasonConfig& cfg, Date day) {
  const double t = static_cast<double>(day - cfg.season_start);
  const double tf = static_cast<double>(cfg.freeze_center - cfg.season_start);
  const double tb = static_cast<double>(cfg.breakup_center - cfg.season_start);
  const auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  return sigmoid((t - tf) / cfg.freeze_steepness) *
         sigmoid((tb - t) / cfg.breakup_steepness);
}

bool pixel_frozen(const ThresholdField& field, double level, double x,
                  double y) {
  return level > field.threshold(x, y);
}

double fraction_from_field(const SyntheticSeasonConfig& cfg,
                           const ThresholdField& field, const Mask& clean,
                           const GridSpec& grid, double level) {
  int n = 0, water = 0;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (!clean.at(y, x)) continue;
      ++n;
      const double wx = grid.origin_x + (x + 0.5) * grid.cell;
      const double wy = grid.origin_y + (y + 0.5) * grid.cell;
      if (!pixel_frozen(field, level, wx, wy)) ++water;
    }
  }
  if (n == 0) throw DataError("no clean pixels");
  (void)cfg;
  return static_cast<double>(water) / n;
}

// Per-channel class means. Optical values are additive-Gaussian around the
// class mean; SAR carries class-dependent multiplicative speckle so the
// spatial receptive field matters.
double optical_mean(SensorKind k, PixelClass cls, int channel) {
  if (k == SensorKind::MODIS)
    return cls == PixelClass::Frozen ? 0.78 - 0.025 * channel
                                     : 0.22 + 0.018 * channel;
  return cls == PixelClass::Frozen ? 0.80 - 0.04 * channel
                                   : 0.25 + 0.03 * channel;
}

struct SarClassModel {
  double mean[2];
  double speckle;
};

SarClassModel sar_model(PixelClass cls) {
  switch (cls) {
    case PixelClass::Frozen: return {{0.72, 0.58}, 0.30};
    case PixelClass::NonFrozen: return {{0.25, 0.12}, 0.10};
    case PixelClass::Background: return {{0.95, 0.85}, 0.20};
  }
  throw ContractError("bad class");
}

std::mt19937_64 engine_for(const SyntheticSeasonConfig& cfg,
                           const std::string& tag, std::int64_t day_serial) {
  std::uint64_t h = hash_combine(cfg.seed, tag);
  h = hash_combine(h, cfg.lake_id);
  h = hash_combine(h, cfg.winter_id);
  h = hash_combine(h, static_cast<std::uint64_t>(day_serial));
  return std::mt19937_64(h);
}

std::uint64_t field_seed(const SyntheticSeasonConfig& cfg) {
  std::uint64_t h = hash_combine(cfg.seed, std::string("field"));
  h = hash_combine(h, cfg.lake_id);
  return hash_combine(h, cfg.winter_id);
}

SensorObservation make_optical_observation(const SyntheticSeasonConfig& cfg,
                                           const LakeGeometry& geom,
                                           const ThresholdField& field,
                                           SensorKind kind, Date day,
                                           double level, std::mt19937_64& rng) {
  const Mask& clean = geom.clean_optical;
  const GridSpec& grid = geom.optical_grid;
  const int n_clean = clean.count();
  const SensorTraits t = traits(kind);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  CleanPixelValues input;
  input.clean = &clean;
  input.values.resize(n_clean, t.channels);
  input.cloudfree.assign(n_clean, 1);

  int row = 0;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (!clean.at(y, x)) continue;
      const double wx = grid.origin_x + (x + 0.5) * grid.cell;
      const double wy = grid.origin_y + (y + 0.5) * grid.cell;
      const PixelClass cls = pixel_frozen(field, level, wx, wy)
                                 ? PixelClass::Frozen
                                 : PixelClass::NonFrozen;
      for (int c = 0; c < t.channels; ++c)
        input.values(row, c) = static_cast<float>(
            optical_mean(kind, cls, c) + cfg.optical_noise * gauss(rng));
      ++row;
    }
  }

  // Partial cloud: a circular blob over the lake, only when it leaves
  // more than half of the clean pixels usable (fully cloudy days were
  // already dropped upstream).
  if (uni(rng) < 0.5 && n_clean > 1) {
    const double cx = uni(rng) * grid.width;
    const double cy = uni(rng) * grid.height;
    const double r = 1.0 + 2.5 * uni(rng);
    std::vector<std::uint8_t> flags(n_clean, 1);
    int covered = 0;
    int idx = 0;
    for (int y = 0; y < grid.height; ++y) {
      for (int x = 0; x < grid.width; ++x) {
        if (!clean.at(y, x)) continue;
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        if (dx * dx + dy * dy < r * r) {
          flags[idx] = 0;
          ++covered;
        }
        ++idx;
      }
    }
    if (covered * 2 <= n_clean) input.cloudfree = flags;
  }

  SensorObservation obs = pad_to_patch(input, kind, day, cfg.lake_id);

  // cloud radiometry on the masked lake cells
  for (int y = 0; y < clean.height; ++y)
    for (int x = 0; x < clean.width; ++x)
      if (clean.at(y, x) && !obs.valid.at(y, x))
        for (int c = 0; c < t.channels; ++c)
          obs.values.at(y, x, c) =
              static_cast<float>(0.88 + 0.08 * gauss(rng));
  return obs;
}

SensorObservation make_sar_observation(const SyntheticSeasonConfig& cfg,
                                       const LakeGeometry& geom,
                                       const ThresholdField& field, Date day,
                                       double level, std::mt19937_64& rng) {
  const Mask& clean = geom.clean_sar;
  const GridSpec& grid = geom.sar_grid;
  std::normal_distribution<double> gauss(0.0, 1.0);

  SensorObservation obs;
  obs.sensor = SensorKind::SAR;
  obs.date = day;
  obs.lake_id = cfg.lake_id;
  obs.values = GridTensor<float>(grid.height, grid.width, 2);
  obs.valid = Mask(grid.height, grid.width);

  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      PixelClass cls = PixelClass::Background;
      if (clean.at(y, x)) {
        const double wx = grid.origin_x + (x + 0.5) * grid.cell;
        const double wy = grid.origin_y + (y + 0.5) * grid.cell;
        cls = pixel_frozen(field, level, wx, wy) ? PixelClass::Frozen
                                                 : PixelClass::NonFrozen;
        obs.valid.set(y, x, true);
      }
      const SarClassModel m = sar_model(cls);
      for (int c = 0; c < 2; ++c) {
        const double speckle = std::max(0.05, 1.0 + m.speckle * gauss(rng));
        obs.values.at(y, x, c) = static_cast<float>(
            m.mean[c] * speckle + cfg.sar_noise * gauss(rng));
      }
    }
  }
  obs.cloud_free_fraction = 1.0;
  return obs;
}

}  // namespace

void SyntheticSeasonConfig::validate() const {
  if (!(season_start < season_end)) throw ConfigError("empty season window");
  if (!(freeze_center < breakup_center))
    throw ConfigError("freeze-up center must precede break-up center");
  if (freeze_steepness <= 0 || breakup_steepness <= 0)
    throw ConfigError("sigmoid steepness must be positive");
  if (optical_noise < 0 || sar_noise < 0)
    throw ConfigError("noise levels must be non-negative");
  for (double p : {modis_cloud_prob, viirs_cloud_prob})
    if (p < 0 || p > 1) throw ConfigError("cloud probability outside [0,1]");
  if (modis_revisit < 1 || viirs_revisit < 1 || sar_revisit < 1)
    throw ConfigError("revisit period must be at least one day");
}

double synthetic_true_fraction(const SyntheticSeasonConfig& cfg, Date day) {
  SyntheticSeasonConfig c = cfg;
  if (c.outline.empty()) c.outline = default_lake_outline(c.lake_id);
  const ThresholdField field(field_seed(c));
  GridSpec optical{12, 12, 0.0, 0.0, 1.0};
  Mask clean = build_clean_pixel_mask(c.outline, optical);
  return fraction_from_field(c, field, clean, optical, freeze_level(c, day));
}

LakeWinter generate_synthetic_season(const SyntheticSeasonConfig& config) {
  SyntheticSeasonConfig cfg = config;
  cfg.validate();
  if (cfg.outline.empty()) cfg.outline = default_lake_outline(cfg.lake_id);

  LakeWinter lw;
  lw.lake_id = cfg.lake_id;
  lw.winter_id = cfg.winter_id;
  lw.season_start = cfg.season_start;
  lw.season_end = cfg.season_end;
  GridSpec optical{12, 12, 0.0, 0.0, 1.0};
  GridSpec sar{128, 128, 0.0, 0.0, 12.0 / 128.0};
  lw.geometry = make_lake_geometry(cfg.lake_id, cfg.outline, optical, sar);

  const ThresholdField field(field_seed(cfg));

  for (Date day = cfg.season_start; !(cfg.season_end < day); day = day + 1) {
    const double level = freeze_level(cfg, day);
    const std::int64_t t = day - cfg.season_start;

    DayLabel label;
    label.date = day;
    label.water_fraction = fraction_from_field(cfg, field, lw.geometry.clean_optical,
                                               optical, level);
    label.is_transition =
        label.water_fraction > 0.0 && label.water_fraction < 1.0;
    if (!label.is_transition) {
      LabelGrid g(optical.height, optical.width, PixelClass::Background);
      const PixelClass cls = label.water_fraction == 1.0 ? PixelClass::NonFrozen
                                                         : PixelClass::Frozen;
      for (int y = 0; y < optical.height; ++y)
        for (int x = 0; x < optical.width; ++x)
          if (lw.geometry.clean_optical.at(y, x)) g.set(y, x, cls);
      label.per_pixel = std::move(g);
    }
    lw.labels[day] = std::move(label);

    for (SensorKind kind : kAllSensors) {
      const SensorTraits tr = traits(kind);
      const int revisit = kind == SensorKind::MODIS   ? cfg.modis_revisit
                          : kind == SensorKind::VIIRS ? cfg.viirs_revisit
                                                      : cfg.sar_revisit;
      if (t % revisit != 0) continue;

      auto rng = engine_for(cfg, to_string(kind), day.serial());
      if (tr.optical) {
        const double p = kind == SensorKind::MODIS ? cfg.modis_cloud_prob
                                                   : cfg.viirs_cloud_prob;
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        if (uni(rng) < p) continue;  // fully cloudy day
        SensorObservation obs =
            make_optical_observation(cfg, lw.geometry, field, kind, day, level, rng);
        if (filter_by_cloud_fraction(obs)) lw.observations.push_back(std::move(obs));
      } else {
        lw.observations.push_back(
            make_sar_observation(cfg, lw.geometry, field, day, level, rng));
      }
    }
  }

  std::stable_sort(lw.observations.begin(), lw.observations.end(),
                   [](const SensorObservation& a, const SensorObservation& b) {
                     if (a.date != b.date) return a.date < b.date;
                     return slot_priority(a.sensor) < slot_priority(b.sensor);
                   });
  return lw;
}

Polygon default_lake_outline(const std::string& lake_id) {
  if (lake_id == "sihl")
    return {{0.6, 0.8}, {6.0, 0.4}, {11.4, 1.2}, {11.6, 6.0},
            {11.0, 11.2}, {5.5, 11.6}, {0.8, 10.8}, {0.3, 5.5}};
  if (lake_id == "sils")
    return {{2.2, 1.5}, {8.0, 0.9}, {10.5, 3.5}, {9.8, 8.3},
            {5.5, 10.2}, {2.0, 7.5}};
  if (lake_id == "silvaplana")
    return {{1.5, 3.2}, {7.5, 1.8}, {10.6, 4.2}, {9.0, 7.0}, {3.0, 6.4}};
  if (lake_id == "stmoritz")
    return {{4.1, 4.2}, {7.9, 4.05}, {8.1, 7.4}, {4.4, 7.9}};
  throw ConfigError("no default outline for lake '" + lake_id + "'");
}

SyntheticSeasonConfig season_config_for(const SyntheticDatasetConfig& cfg,
                                        const std::string& lake,
                                        const std::string& winter) {
  auto wit = std::find(cfg.winters.begin(), cfg.winters.end(), winter);
  if (wit == cfg.winters.end()) throw ConfigError("unknown winter " + winter);
  const int widx = static_cast<int>(wit - cfg.winters.begin());

  SyntheticSeasonConfig sc;
  sc.seed = hash_combine(hash_combine(cfg.seed, lake), winter);
  sc.lake_id = lake;
  sc.winter_id = winter;
  sc.season_start = Date(2016 + widx, 10, 1);
  sc.season_end = sc.season_start + (cfg.season_days - 1);

  std::mt19937_64 rng(hash_combine(sc.seed, std::string("phenology")));
  std::uniform_int_distribution<int> jitter(-cfg.phenology_jitter,
                                            cfg.phenology_jitter);
  sc.freeze_center = sc.season_start + (cfg.freeze_center_day + jitter(rng));
  sc.breakup_center = sc.season_start + (cfg.breakup_center_day + jitter(rng));
  sc.optical_noise = cfg.optical_noise;
  sc.sar_noise = cfg.sar_noise;
  sc.modis_cloud_prob = cfg.cloud_prob;
  sc.viirs_cloud_prob = cfg.cloud_prob;
  sc.sar_revisit = cfg.sar_revisit;
  sc.outline = default_lake_outline(lake);
  return sc;
}

Dataset generate_synthetic_dataset(const SyntheticDatasetConfig& cfg) {
  Dataset ds;
  for (const auto& winter : cfg.winters)
    for (const auto& lake : cfg.lakes)
      ds.items.push_back(
          generate_synthetic_season(season_config_for(cfg, lake, winter)));
  return ds;
}

}  // namespace lakeice
