#include "lakeice/pipeline/predict.hpp"

#include <cmath>

namespace lakeice {

std::vector<DailyPrediction> predict_daily(const FusionModel<float>& model,
                                           const RegressionNet<float>& net,
                                           const LakeWinter& lw) {
  EmbeddingSeries series = compute_embeddings(model, lw);
  std::vector<DailyPrediction> out;
  std::vector<ObservationPrediction> day;
  for (int i = 0; i < static_cast<int>(series.items.size()); ++i) {
    EmbeddingWindow w = build_window_pinned(series, i, net.cfg.window);
    const double value = net.forward(window_tensors(series, w), nullptr);
    const Embedding& e = series.items[i];
    if (!day.empty() && day.back().date != e.date) {
      out.push_back(fuse_daily(day));
      day.clear();
    }
    day.push_back({e.sensor, e.date, value});
  }
  if (!day.empty()) out.push_back(fuse_daily(day));
  return out;
}

WaterFractionSeries to_series(const std::vector<DailyPrediction>& daily,
                              const std::string& lake_id,
                              const std::string& winter_id,
                              const std::string& source,
                              bool use_ensemble_mean) {
  WaterFractionSeries s;
  s.lake_id = lake_id;
  s.winter_id = winter_id;
  s.source = source;
  for (const auto& d : daily) {
    double v = use_ensemble_mean && d.has_ensemble ? d.ensemble_mean : d.fused;
    s.add(d.date, std::clamp(v, 0.0, 1.0));
  }
  return s;
}

WaterFractionSeries label_series(const LakeWinter& lw) {
  WaterFractionSeries s;
  s.lake_id = lw.lake_id;
  s.winter_id = lw.winter_id;
  s.source = "label";
  for (const auto& [date, label] : lw.labels) s.add(date, label.water_fraction);
  return s;
}

std::map<SensorKind, ConfusionMatrix> evaluate_segmentation(
    const FusionModel<float>& model,
    const std::vector<const LakeWinter*>& lws) {
  std::map<SensorKind, ConfusionMatrix> out;
  for (const LakeWinter* lw : lws) {
    for (const auto& obs : lw->observations) {
      const DayLabel* label = lw->label_at(obs.date);
      if (!label || label->is_transition) continue;
      const GridTensor<float> emb = model.embed(obs.values, obs.sensor);
      const GridTensor<float> probs = segment(model.seg_head, emb);
      const LabelGrid pred = argmax_classes(probs);
      const LabelGrid truth = lw->rasterize_label(obs.date, false);
      const Mask& valid12 = obs.sensor == SensorKind::SAR
                                ? lw->geometry.clean_optical
                                : obs.valid;
      out[obs.sensor].accumulate(truth, pred, supervision_mask(truth, valid12));
    }
  }
  return out;
}

double fraction_mae_non_transition(const std::vector<DailyPrediction>& daily,
                                   const LakeWinter& lw) {
  double total = 0;
  int n = 0;
  for (const auto& d : daily) {
    const DayLabel* label = lw.label_at(d.date);
    if (!label || label->is_transition) continue;
    total += std::abs(d.fused - label->water_fraction);
    ++n;
  }
  if (n == 0) throw DataError("no non-transition predictions to score");
  return total / n;
}

}  // namespace lakeice
