#pragma once

#include <map>

#include "lakeice/eval/metrics.hpp"
#include "lakeice/eval/phenology.hpp"
#include "lakeice/train/stages.hpp"

namespace lakeice {

// Per-observation regression through pinned windows, fused per day.
std::vector<DailyPrediction> predict_daily(const FusionModel<float>& model,
                                           const RegressionNet<float>& net,
                                           const LakeWinter& lw);

WaterFractionSeries to_series(const std::vector<DailyPrediction>& daily,
                              const std::string& lake_id,
                              const std::string& winter_id,
                              const std::string& source,
                              bool use_ensemble_mean = false);

WaterFractionSeries label_series(const LakeWinter& lw);

// Segmentation quality per sensor over the non-transition observations of
// the given lake-winters, evaluated at the shared 12x12 embedding grid.
std::map<SensorKind, ConfusionMatrix> evaluate_segmentation(
    const FusionModel<float>& model, const std::vector<const LakeWinter*>& lws);

// Mean absolute error of the fused daily water fraction against labels on
// non-transition days.
double fraction_mae_non_transition(
    const std::vector<DailyPrediction>& daily, const LakeWinter& lw);

}  // namespace lakeice
