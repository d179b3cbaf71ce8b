#pragma once

#include <map>

#include "lakeice/pipeline/predict.hpp"
#include "lakeice/train/split.hpp"
#include "lakeice/train/stages.hpp"

namespace lakeice {

// Mean and population standard deviation across ensemble members.
struct MetricStat {
  std::vector<double> values;

  double mean() const;
  double stddev() const;
  void add(double v) { values.push_back(v); }
};

struct EnsembleResult {
  std::vector<Pipeline> members;
  std::map<SensorKind, MetricStat> macc;  // held-out segmentation accuracy
  std::map<SensorKind, MetricStat> miou;
  MetricStat fraction_mae;
  // Ensembled daily predictions per held-out lake-winter, with per-date
  // (mean, std) over members stored in the DailyPrediction.
  std::map<std::pair<std::string, std::string>, std::vector<DailyPrediction>>
      ensembled;
};

// Trains n full pipelines with the given seeds (defaults to seed, seed+1,
// ...), evaluates each on the split's test partition, and aggregates.
EnsembleResult train_ensemble(const ExperimentSplit& split,
                              const TrainConfig& config,
                              const EncoderConfig& encoder_cfg, int n,
                              std::vector<std::uint64_t> seeds = {},
                              const ProgressFn& progress = nullptr);

}  // namespace lakeice
