#include "lakeice/train/stages.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "lakeice/core/hash.hpp"
#include "lakeice/nn/losses.hpp"
#include "lakeice/nn/optim.hpp"

namespace lakeice {
namespace {

int worker_count(int n_items) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int t = hw == 0 ? 2 : static_cast<int>(hw);
  return std::max(1, std::min(t, n_items));
}

// Runs fn(i) for i in [0, n) across workers; writers must touch disjoint
// slots so the result is order-independent.
template <typename Fn>
void parallel_samples(int n, Fn&& fn) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&fn, t, n, workers] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct SegSample {
  const SensorObservation* obs = nullptr;
  LabelGrid labels;
  std::vector<std::uint8_t> supervised;
};

// Observations usable for segmentation training: non-transition days only.
std::vector<SegSample> collect_seg_samples(
    const std::vector<const LakeWinter*>& train, SensorKind kind,
    bool sar_native_labels) {
  std::vector<SegSample> samples;
  for (const LakeWinter* lw : train) {
    for (const auto& obs : lw->observations) {
      if (obs.sensor != kind) continue;
      const DayLabel* label = lw->label_at(obs.date);
      if (!label || label->is_transition) continue;
      SegSample s;
      s.obs = &obs;
      if (sar_native_labels) {
        s.labels = lw->rasterize_label(obs.date, true);
        s.supervised = supervision_mask(s.labels, obs.valid);
      } else if (kind == SensorKind::SAR) {
        // stage 3: SAR supervised at the optical grid through the resize
        s.labels = lw->rasterize_label(obs.date, false);
        Mask valid12 = lw->geometry.clean_optical;  // SAR is cloud-free
        s.supervised = supervision_mask(s.labels, valid12);
      } else {
        s.labels = lw->rasterize_label(obs.date, false);
        s.supervised = supervision_mask(s.labels, obs.valid);
      }
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

ChannelStats<float> compute_stats(const std::vector<SegSample>& samples,
                                  int channels) {
  ChannelStats<float> st;
  st.identity(channels);
  double n = 0;
  VecX<double> sum = VecX<double>::Zero(channels);
  VecX<double> sum2 = VecX<double>::Zero(channels);
  for (const auto& s : samples) {
    const auto& v = s.obs->values;
    for (int p = 0; p < v.pixels(); ++p) {
      if (!s.obs->valid.bits[p]) continue;
      n += 1;
      for (int c = 0; c < channels; ++c) {
        sum(c) += v.values(p, c);
        sum2(c) += static_cast<double>(v.values(p, c)) * v.values(p, c);
      }
    }
  }
  if (n == 0) return st;
  for (int c = 0; c < channels; ++c) {
    const double mean = sum(c) / n;
    const double var = std::max(sum2(c) / n - mean * mean, 1e-12);
    st.mean(0, c) = static_cast<float>(mean);
    st.std(0, c) = static_cast<float>(std::sqrt(var));
  }
  return st;
}

enum class SegPath { SarNative, Optical, SarFused };

double sample_loss_and_grad(const FusionModel<float>& model, SegPath path,
                            const SegSample& s, GradBuffer<float>* g) {
  const GridTensor<float>& x = s.obs->values;
  if (path == SegPath::SarNative) {
    typename FusionModel<float>::SarNativeCache cache;
    GridTensor<float> logits = model.sar_native_logits(x, &cache);
    auto res = softmax_cross_entropy_with_logits(logits.values, s.labels,
                                                 s.supervised);
    if (g) {
      GridTensor<float> dl(logits.height, logits.width, logits.channels());
      dl.values = res.dlogits;
      model.sar_native_backward(cache, dl, {&g->grads, 0});
    }
    return res.loss;
  }
  if (path == SegPath::Optical) {
    typename FusionModel<float>::OpticalPathCache cache;
    GridTensor<float> logits = model.optical_logits(x, s.obs->sensor, &cache);
    auto res = softmax_cross_entropy_with_logits(logits.values, s.labels,
                                                 s.supervised);
    if (g) {
      GridTensor<float> dl(logits.height, logits.width, logits.channels());
      dl.values = res.dlogits;
      model.optical_backward(cache, dl, {&g->grads, 0});
    }
    return res.loss;
  }
  typename FusionModel<float>::SarFusedCache cache;
  GridTensor<float> logits = model.sar_fused_logits(x, &cache);
  auto res =
      softmax_cross_entropy_with_logits(logits.values, s.labels, s.supervised);
  if (g) {
    GridTensor<float> dl(logits.height, logits.width, logits.channels());
    dl.values = res.dlogits;
    model.sar_fused_backward(cache, dl, {&g->grads, 0});
  }
  return res.loss;
}

double mean_loss(const FusionModel<float>& model, SegPath path,
                 const std::vector<SegSample>& samples) {
  std::vector<double> losses(samples.size());
  parallel_samples(static_cast<int>(samples.size()), [&](int i) {
    losses[i] = sample_loss_and_grad(model, path, samples[i], nullptr);
  });
  double total = 0;
  for (double l : losses) total += l;
  return total / static_cast<double>(samples.size());
}

struct SegOptimizer {
  ParamList<float> trainable;
  std::vector<std::size_t> slots;
  std::unique_ptr<Adam<float>> adam;
  std::unique_ptr<Sgd<float>> sgd;
  LrSchedule schedule;

  SegOptimizer(ParamList<float> t, std::vector<std::size_t> s,
               const StageConfig& stage)
      : trainable(std::move(t)), slots(std::move(s)), schedule(stage.schedule()) {
    if (stage.optimizer == OptimizerKind::Adam)
      adam = std::make_unique<Adam<float>>(trainable);
    else
      sgd = std::make_unique<Sgd<float>>();
  }

  void apply(const GradBuffer<float>& full) {
    GradBuffer<float> sub(trainable);
    for (std::size_t i = 0; i < slots.size(); ++i)
      sub.grads[i] = full.grads[slots[i]];
    if (adam)
      adam->step(trainable, sub, schedule);
    else
      sgd->step(trainable, sub, schedule);
  }
};

std::vector<std::size_t> slot_range(std::size_t base, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = base + i;
  return v;
}

double run_seg_epoch(FusionModel<float>& model, SegPath path,
                     const std::vector<SegSample>& samples, int batch_size,
                     SegOptimizer& opt, std::mt19937& rng) {
  std::vector<int> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);

  ParamList<float> full_params = model.params();
  double epoch_loss = 0;
  int n_seen = 0;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const int b = static_cast<int>(
        std::min<std::size_t>(batch_size, order.size() - start));
    std::vector<GradBuffer<float>> sample_grads;
    sample_grads.reserve(b);
    for (int i = 0; i < b; ++i) sample_grads.emplace_back(full_params);
    std::vector<double> losses(b, 0.0);

    parallel_samples(b, [&](int i) {
      losses[i] = sample_loss_and_grad(model, path, samples[order[start + i]],
                                       &sample_grads[i]);
    });

    GradBuffer<float> sum(full_params);
    for (int i = 0; i < b; ++i) {
      sum.add(sample_grads[i]);
      epoch_loss += losses[i];
    }
    sum.scale(1.0f / static_cast<float>(b));
    opt.apply(sum);
    n_seen += b;
  }
  return epoch_loss / std::max(1, n_seen);
}

std::mt19937 stage_rng(const TrainConfig& cfg, const std::string& tag) {
  return std::mt19937(
      static_cast<std::uint32_t>(hash_combine(cfg.seed, tag) & 0xffffffffu));
}

void report(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

}  // namespace

Pipeline make_pipeline(const TrainConfig& config,
                       const EncoderConfig& encoder_cfg) {
  config.validate();
  Pipeline p;
  p.config = config;
  p.encoder_cfg = encoder_cfg;
  p.regression_cfg.window = config.window_size;
  p.regression_cfg.embed_channels = encoder_cfg.embed_channels;
  p.regression_cfg.spatial = encoder_cfg.optical_size;
  p.regression_cfg.leaky_alpha = encoder_cfg.leaky_alpha;
  p.model = FusionModel<float>(encoder_cfg);
  p.regression = RegressionNet<float>(p.regression_cfg);
  return p;
}

StageResult pretrain_sar_encoder(Pipeline& p,
                                 const std::vector<const LakeWinter*>& train,
                                 const ProgressFn& progress) {
  auto samples = collect_seg_samples(train, SensorKind::SAR, true);
  if (samples.empty()) throw DataError("no non-transition SAR samples");

  auto rng = stage_rng(p.config, "stage1");
  p.model.sar_encoder.init(rng);
  p.model.sar_aux_head.init(rng);

  SegOptimizer opt(
      [&] {
        ParamList<float> full = p.model.params();
        ParamList<float> t;
        for (auto i : slot_range(FusionModel<float>::kSarBase, 12)) t.push_back(full[i]);
        for (auto i : slot_range(FusionModel<float>::kAuxBase, 2)) t.push_back(full[i]);
        return t;
      }(),
      [&] {
        auto v = slot_range(FusionModel<float>::kSarBase, 12);
        auto aux = slot_range(FusionModel<float>::kAuxBase, 2);
        v.insert(v.end(), aux.begin(), aux.end());
        return v;
      }(),
      p.config.sar_pretrain);

  StageResult result;
  result.initial_loss = mean_loss(p.model, SegPath::SarNative, samples);
  const int epochs = p.config.scaled_epochs(p.config.sar_pretrain);
  for (int e = 0; e < epochs; ++e) {
    const double loss = run_seg_epoch(p.model, SegPath::SarNative, samples,
                                      p.config.sar_pretrain.batch_size, opt, rng);
    result.epoch_losses.push_back(loss);
    report(progress, "stage1 epoch " + std::to_string(e + 1) + "/" +
                         std::to_string(epochs) + " loss " + std::to_string(loss));
  }
  p.stage1_done = true;
  return result;
}

StageResult pretrain_optical_and_shared(
    Pipeline& p, const std::vector<const LakeWinter*>& train,
    const ProgressFn& progress) {
  auto modis = collect_seg_samples(train, SensorKind::MODIS, false);
  auto viirs = collect_seg_samples(train, SensorKind::VIIRS, false);
  if (modis.empty() && viirs.empty())
    throw DataError("no non-transition optical samples");

  p.model.modis_stats = compute_stats(modis, p.model.modis_encoder.conv.in_channels);
  p.model.viirs_stats = compute_stats(viirs, p.model.viirs_encoder.conv.in_channels);

  auto rng = stage_rng(p.config, "stage2");
  p.model.modis_encoder.init(rng);
  p.model.viirs_encoder.init(rng);
  p.model.shared_block.init(rng);
  p.model.seg_head.init(rng);

  SegOptimizer opt(
      [&] {
        ParamList<float> full = p.model.params();
        ParamList<float> t;
        for (auto i : slot_range(FusionModel<float>::kModisBase, 2)) t.push_back(full[i]);
        for (auto i : slot_range(FusionModel<float>::kViirsBase, 2)) t.push_back(full[i]);
        for (auto i : slot_range(FusionModel<float>::kSharedBase, 4)) t.push_back(full[i]);
        for (auto i : slot_range(FusionModel<float>::kSegBase, 2)) t.push_back(full[i]);
        return t;
      }(),
      [&] {
        auto v = slot_range(FusionModel<float>::kModisBase, 2);
        for (auto i : slot_range(FusionModel<float>::kViirsBase, 2)) v.push_back(i);
        for (auto i : slot_range(FusionModel<float>::kSharedBase, 4)) v.push_back(i);
        for (auto i : slot_range(FusionModel<float>::kSegBase, 2)) v.push_back(i);
        return v;
      }(),
      p.config.optical_pretrain);

  StageResult result;
  {
    std::vector<SegSample> all = modis;
    all.insert(all.end(), viirs.begin(), viirs.end());
    result.initial_loss = mean_loss(p.model, SegPath::Optical, all);
  }

  const int epochs = p.config.scaled_epochs(p.config.optical_pretrain);
  for (int e = 0; e < epochs; ++e) {
    const SensorKind kind = e % 2 == 0 ? SensorKind::MODIS : SensorKind::VIIRS;
    const auto& samples = kind == SensorKind::MODIS ? modis : viirs;
    if (samples.empty()) {
      report(progress, "stage2 epoch " + std::to_string(e + 1) + ": no " +
                           to_string(kind) + " samples, skipped");
      continue;
    }
    const double loss = run_seg_epoch(p.model, SegPath::Optical, samples,
                                      p.config.optical_pretrain.batch_size, opt,
                                      rng);
    p.alternation_log.push_back(to_string(kind));
    result.epoch_losses.push_back(loss);
    report(progress, "stage2 epoch " + std::to_string(e + 1) + "/" +
                         std::to_string(epochs) + " [" + to_string(kind) +
                         "] loss " + std::to_string(loss));
  }
  p.stage2_done = true;
  return result;
}

StageResult finetune_shared_with_sar(Pipeline& p,
                                     const std::vector<const LakeWinter*>& train,
                                     const ProgressFn& progress) {
  if (!p.stage1_done || !p.stage2_done)
    throw ContractError("fine-tuning requires both pre-training stages");
  auto samples = collect_seg_samples(train, SensorKind::SAR, false);
  if (samples.empty()) throw DataError("no non-transition SAR samples");

  auto rng = stage_rng(p.config, "stage3");
  SegOptimizer opt(
      [&] {
        ParamList<float> full = p.model.params();
        ParamList<float> t;
        for (auto i : slot_range(FusionModel<float>::kSarBase, 12)) t.push_back(full[i]);
        for (auto i : slot_range(FusionModel<float>::kSharedBase, 4)) t.push_back(full[i]);
        return t;
      }(),
      [&] {
        auto v = slot_range(FusionModel<float>::kSarBase, 12);
        for (auto i : slot_range(FusionModel<float>::kSharedBase, 4)) v.push_back(i);
        return v;
      }(),
      p.config.shared_finetune);

  StageResult result;
  result.initial_loss = mean_loss(p.model, SegPath::SarFused, samples);
  const int epochs = p.config.scaled_epochs(p.config.shared_finetune);
  for (int e = 0; e < epochs; ++e) {
    const double loss = run_seg_epoch(p.model, SegPath::SarFused, samples,
                                      p.config.shared_finetune.batch_size, opt,
                                      rng);
    result.epoch_losses.push_back(loss);
    report(progress, "stage3 epoch " + std::to_string(e + 1) + "/" +
                         std::to_string(epochs) + " loss " + std::to_string(loss));
  }
  p.stage3_done = true;
  return result;
}

EmbeddingSeries compute_embeddings(const FusionModel<float>& model,
                                   const LakeWinter& lw) {
  std::vector<Embedding> slots(lw.observations.size());
  parallel_samples(static_cast<int>(lw.observations.size()), [&](int i) {
    const auto& obs = lw.observations[i];
    slots[i].values = model.embed(obs.values, obs.sensor);
    slots[i].sensor = obs.sensor;
    slots[i].date = obs.date;
  });
  EmbeddingSeries series;
  for (auto& e : slots) series.add(std::move(e));
  return series;
}

StageResult train_regression(Pipeline& p,
                             const std::vector<const LakeWinter*>& train,
                             const ProgressFn& progress) {
  if (!p.stage1_done || !p.stage2_done || !p.stage3_done)
    throw ContractError("missing step-1 weights");

  const int window = p.regression_cfg.window;
  std::vector<EmbeddingSeries> series;
  std::vector<const LakeWinter*> lws;
  for (const LakeWinter* lw : train) {
    EmbeddingSeries s = compute_embeddings(p.model, *lw);
    if (static_cast<int>(s.distinct_dates().size()) < window)
      throw DataError("fewer than window-size dates in " + lw->lake_id + " " +
                      lw->winter_id);
    series.push_back(std::move(s));
    lws.push_back(lw);
  }

  auto rng = stage_rng(p.config, "regression");
  p.regression.init(rng);

  ParamList<float> params;
  p.regression.collect_params("regression", params);
  Sgd<float> sgd;
  std::unique_ptr<Adam<float>> adam;
  if (p.config.regression.optimizer == OptimizerKind::Adam)
    adam = std::make_unique<Adam<float>>(params);
  const LrSchedule schedule = p.config.regression.schedule();
  const int batch_dates = p.config.regression.batch_size;

  struct Entry {
    int series_idx;
    int emb_idx;
    int day_offset;  // position of the date within the batch run
  };

  // One batch = all observations on a contiguous run of `batch_dates`
  // available dates from one lake-winter.
  auto make_batches = [&](std::mt19937& r) {
    std::vector<std::vector<Entry>> batches;
    for (std::size_t si = 0; si < series.size(); ++si) {
      const auto dates = series[si].distinct_dates();
      if (static_cast<int>(dates.size()) < batch_dates) continue;
      std::uniform_int_distribution<int> phase_dist(0, batch_dates - 1);
      const int phase = phase_dist(r);
      for (std::size_t start = phase; start + batch_dates <= dates.size();
           start += batch_dates) {
        std::vector<Entry> batch;
        for (int d = 0; d < batch_dates; ++d) {
          const Date date = dates[start + d];
          for (int ei = 0; ei < static_cast<int>(series[si].items.size()); ++ei)
            if (series[si].items[ei].date == date)
              batch.push_back({static_cast<int>(si), ei, d});
        }
        if (static_cast<int>(batch.size()) >= 2) batches.push_back(std::move(batch));
      }
    }
    std::shuffle(batches.begin(), batches.end(), r);
    return batches;
  };

  auto run_epoch = [&](std::mt19937& r, bool update) {
    auto batches = make_batches(r);
    double loss_sum = 0;
    int n = 0;
    for (const auto& batch : batches) {
      const int m = static_cast<int>(batch.size());
      std::vector<typename RegressionNet<float>::Cache> caches(m);
      VecX<float> preds(m), targets(m);
      std::vector<int> day_group(m);
      parallel_samples(m, [&](int i) {
        const Entry& e = batch[i];
        EmbeddingWindow w =
            build_window_pinned(series[e.series_idx], e.emb_idx, window);
        preds(i) = p.regression.forward(
            window_tensors(series[e.series_idx], w), &caches[i]);
      });
      for (int i = 0; i < m; ++i) {
        const Entry& e = batch[i];
        const DayLabel* label =
            lws[e.series_idx]->label_at(series[e.series_idx].items[e.emb_idx].date);
        targets(i) = label ? static_cast<float>(label->water_fraction) : 0.0f;
        day_group[i] = e.day_offset;
      }
      RegressionBatch<float> rb{preds, targets, day_group};
      loss_sum += regression_loss(rb, p.config.loss_weights);
      ++n;
      if (!update) continue;

      VecX<float> dpred = regression_loss_grad(rb, p.config.loss_weights);
      std::vector<GradBuffer<float>> sample_grads;
      sample_grads.reserve(m);
      for (int i = 0; i < m; ++i) sample_grads.emplace_back(params);
      parallel_samples(m, [&](int i) {
        p.regression.backward(caches[i], dpred(i), {&sample_grads[i].grads, 0});
      });
      GradBuffer<float> sum(params);
      for (int i = 0; i < m; ++i) sum.add(sample_grads[i]);
      if (adam)
        adam->step(params, sum, schedule);
      else
        sgd.step(params, sum, schedule);
    }
    return n == 0 ? 0.0 : loss_sum / n;
  };

  StageResult result;
  {
    auto probe_rng = rng;
    result.initial_loss = run_epoch(probe_rng, false);
  }
  const int epochs = p.config.scaled_epochs(p.config.regression);
  for (int e = 0; e < epochs; ++e) {
    const double loss = run_epoch(rng, true);
    result.epoch_losses.push_back(loss);
    report(progress, "regression epoch " + std::to_string(e + 1) + "/" +
                         std::to_string(epochs) + " loss " + std::to_string(loss));
  }
  p.regression_done = true;
  return result;
}

void run_step1(Pipeline& p, const std::vector<const LakeWinter*>& train,
               const ProgressFn& progress) {
  pretrain_sar_encoder(p, train, progress);
  pretrain_optical_and_shared(p, train, progress);
  finetune_shared_with_sar(p, train, progress);
}

void run_all_stages(Pipeline& p, const std::vector<const LakeWinter*>& train,
                    const ProgressFn& progress) {
  run_step1(p, train, progress);
  train_regression(p, train, progress);
}

Checkpoint pipeline_checkpoint(Pipeline& p, const std::string& stage_tag,
                               const std::string& version) {
  Checkpoint ck;
  ck.header.stage = stage_tag;
  ck.header.seed = p.config.seed;
  ck.header.config_hash = p.config.hash();
  ck.header.version = version;
  store_fusion_model(ck, p.model);
  if (p.regression_done) store_regression_net(ck, p.regression);
  return ck;
}

void load_pipeline_weights(Pipeline& p, const Checkpoint& ck) {
  load_fusion_model(ck, p.model);
  if (ck.header.has_regression) {
    p.regression = RegressionNet<float>(ck.header.regression);
    load_regression_net(ck, p.regression);
    p.regression_done = true;
  }
  const std::string& s = ck.header.stage;
  p.stage1_done = true;
  p.stage2_done = s != "sar_pretrain";
  p.stage3_done = s == "shared_finetune" || s == "regression";
}

}  // namespace lakeice
