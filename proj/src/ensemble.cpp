#include "lakeice/train/ensemble.hpp"

#include <cmath>
#include <set>

namespace lakeice {

double MetricStat::mean() const {
  if (values.empty()) return 0;
  double s = 0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double MetricStat::stddev() const {
  if (values.size() < 2) return 0;
  const double m = mean();
  double s = 0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size()));
}

EnsembleResult train_ensemble(const ExperimentSplit& split,
                              const TrainConfig& config,
                              const EncoderConfig& encoder_cfg, int n,
                              std::vector<std::uint64_t> seeds,
                              const ProgressFn& progress) {
  if (n < 1) throw ConfigError("ensemble size must be at least 1");
  if (seeds.empty())
    for (int i = 0; i < n; ++i) seeds.push_back(config.seed + i);
  if (static_cast<int>(seeds.size()) != n)
    throw ConfigError("need one seed per ensemble member");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size() &&
      progress)
    progress("warning: duplicate ensemble seeds, members will coincide");

  EnsembleResult result;
  std::map<std::pair<std::string, std::string>,
           std::vector<std::vector<DailyPrediction>>>
      member_daily;

  for (int i = 0; i < n; ++i) {
    if (progress)
      progress("ensemble member " + std::to_string(i + 1) + "/" +
               std::to_string(n) + " (seed " + std::to_string(seeds[i]) + ")");
    TrainConfig member_cfg = config;
    member_cfg.seed = seeds[i];
    Pipeline p = make_pipeline(member_cfg, encoder_cfg);
    run_all_stages(p, split.train, progress);

    auto seg = evaluate_segmentation(p.model, split.test);
    for (auto& [sensor, cm] : seg) {
      result.macc[sensor].add(mean_pixel_accuracy(cm));
      result.miou[sensor].add(mean_iou(cm));
    }
    double mae_sum = 0;
    int mae_n = 0;
    for (const LakeWinter* lw : split.test) {
      auto daily = predict_daily(p.model, p.regression, *lw);
      mae_sum += fraction_mae_non_transition(daily, *lw);
      ++mae_n;
      member_daily[{lw->lake_id, lw->winter_id}].push_back(std::move(daily));
    }
    result.fraction_mae.add(mae_sum / std::max(1, mae_n));
    result.members.push_back(std::move(p));
  }

  // Date-wise ensemble statistics over members (population std).
  for (auto& [key, runs] : member_daily) {
    std::vector<DailyPrediction> combined = runs.front();
    for (std::size_t d = 0; d < combined.size(); ++d) {
      double sum = 0;
      for (const auto& run : runs) sum += run[d].fused;
      const double mean = sum / static_cast<double>(runs.size());
      double var = 0;
      for (const auto& run : runs)
        var += (run[d].fused - mean) * (run[d].fused - mean);
      combined[d].ensemble_mean = mean;
      combined[d].ensemble_std = std::sqrt(var / static_cast<double>(runs.size()));
      combined[d].has_ensemble = true;
    }
    result.ensembled[key] = std::move(combined);
  }
  return result;
}

}  // namespace lakeice
