#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lakeice/eval/phenology.hpp"
#include "lakeice/pipeline/window.hpp"

namespace lakeice {

// Full-winter time series: reference fractions as a line, per-day fused
// predictions as points coloured by calendar month.
struct TimeseriesPlot {
  std::string title;
  Date axis_start;
  Date axis_end;
  WaterFractionSeries reference;
  std::vector<DailyPrediction> predictions;
  bool use_ensemble_mean = false;
};

void write_timeseries_svg(const std::filesystem::path& file,
                          const TimeseriesPlot& plot);
void write_timeseries_csv(const std::filesystem::path& file,
                          const TimeseriesPlot& plot);

// Dimension-reduced embedding scatter, coloured by predicted water
// fraction, marker shape per sensor. 3-D inputs are drawn in an
// orthographic projection.
struct EmbeddingPoint {
  double x = 0, y = 0, z = 0;
  double water_fraction = 0;
  SensorKind sensor = SensorKind::MODIS;
  Date date;
};

struct EmbeddingPlot {
  std::string title;
  int dims = 2;  // 2 or 3
  double perplexity = 30.0;
  int iterations = 1000;
  std::vector<EmbeddingPoint> points;
};

void write_embedding_svg(const std::filesystem::path& file,
                         const EmbeddingPlot& plot);
void write_embedding_csv(const std::filesystem::path& file,
                         const EmbeddingPlot& plot);

}  // namespace lakeice
