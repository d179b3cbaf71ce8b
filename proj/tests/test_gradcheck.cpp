#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "lakeice/nn/fusion_model.hpp"
#include "lakeice/nn/losses.hpp"
#include "lakeice/nn/regression_net.hpp"

using namespace lakeice;

namespace {

EncoderConfig mini_config() {
  EncoderConfig cfg;
  cfg.feature_channels = 4;
  cfg.embed_channels = 4;
  cfg.optical_size = 4;
  cfg.sar_size = 8;
  cfg.sar_c1 = 3;
  cfg.sar_c2 = 4;
  cfg.sar_c3 = 6;
  return cfg;
}

GridTensor<double> random_grid(int h, int w, int c, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  GridTensor<double> t(h, w, c);
  for (int p = 0; p < t.pixels(); ++p)
    for (int ch = 0; ch < c; ++ch) t.values(p, ch) = g(rng);
  return t;
}

LabelGrid random_labels(int h, int w, std::mt19937& rng) {
  std::uniform_int_distribution<int> cls(0, 2);
  LabelGrid g(h, w);
  for (auto& c : g.classes) c = static_cast<std::uint8_t>(cls(rng));
  return g;
}

// Central finite differences against the analytic gradient at sampled
// parameter coordinates, with a tighter-step retry to step over leaky-ReLU
// kinks that the perturbation itself may cross.
int check_gradients(ParamList<double>& params, const GradBuffer<double>& analytic,
                    const std::function<double()>& loss_fn, int samples,
                    std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(params.size()) - 1);
  int checked = 0;
  for (int s = 0; s < samples; ++s) {
    const int pi = pick(rng);
    MatX<double>& w = *params[pi].value;
    std::uniform_int_distribution<int> coord(0, static_cast<int>(w.size()) - 1);
    const int ci = coord(rng);
    const double a = analytic.grads[pi](ci);

    bool ok = false;
    for (double eps : {1e-5, 1e-6, 1e-7}) {
      const double saved = w(ci);
      w(ci) = saved + eps;
      const double hi = loss_fn();
      w(ci) = saved - eps;
      const double lo = loss_fn();
      w(ci) = saved;
      const double fd = (hi - lo) / (2 * eps);
      const double rel =
          std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-7});
      if (rel < 1e-4) {
        ok = true;
        break;
      }
    }
    CHECK_MESSAGE(ok, "param ", params[pi].name, " coord ", ci);
    ++checked;
  }
  return checked;
}

}  // namespace

TEST_CASE("segmentation loss gradients match finite differences") {
  EncoderConfig cfg = mini_config();
  std::mt19937 rng(31);
  FusionModel<double> model(cfg, 3, 2, 2);
  model.init(rng);

  GridTensor<double> sar = random_grid(8, 8, 2, rng);
  GridTensor<double> modis = random_grid(4, 4, 3, rng);
  GridTensor<double> viirs = random_grid(4, 4, 2, rng);
  LabelGrid labels8 = random_labels(8, 8, rng);
  LabelGrid labels4 = random_labels(4, 4, rng);
  std::vector<std::uint8_t> sup8(64, 1);
  std::vector<std::uint8_t> sup4(16, 1);
  sup8[3] = sup8[17] = 0;  // a few excluded pixels
  sup4[5] = 0;

  ParamList<double> params = model.params();

  SUBCASE("SAR native pre-training path") {
    GradBuffer<double> grads(params);
    auto loss_fn = [&] {
      typename FusionModel<double>::SarNativeCache cache;
      auto logits = model.sar_native_logits(sar, &cache);
      return softmax_cross_entropy_with_logits(logits.values, labels8, sup8).loss;
    };
    {
      typename FusionModel<double>::SarNativeCache cache;
      auto logits = model.sar_native_logits(sar, &cache);
      auto res = softmax_cross_entropy_with_logits(logits.values, labels8, sup8);
      GridTensor<double> dl(logits.height, logits.width, logits.channels());
      dl.values = res.dlogits;
      model.sar_native_backward(cache, dl, {&grads.grads, 0});
    }
    CHECK(check_gradients(params, grads, loss_fn, 60, rng) == 60);
  }

  SUBCASE("optical path through shared block and head") {
    GradBuffer<double> grads(params);
    auto loss_fn = [&] {
      typename FusionModel<double>::OpticalPathCache cache;
      auto logits = model.optical_logits(modis, SensorKind::MODIS, &cache);
      double l = softmax_cross_entropy_with_logits(logits.values, labels4, sup4).loss;
      typename FusionModel<double>::OpticalPathCache vcache;
      auto vlogits = model.optical_logits(viirs, SensorKind::VIIRS, &vcache);
      return l + softmax_cross_entropy_with_logits(vlogits.values, labels4, sup4).loss;
    };
    {
      typename FusionModel<double>::OpticalPathCache cache;
      auto logits = model.optical_logits(modis, SensorKind::MODIS, &cache);
      auto res = softmax_cross_entropy_with_logits(logits.values, labels4, sup4);
      GridTensor<double> dl(4, 4, 3);
      dl.values = res.dlogits;
      model.optical_backward(cache, dl, {&grads.grads, 0});

      typename FusionModel<double>::OpticalPathCache vcache;
      auto vlogits = model.optical_logits(viirs, SensorKind::VIIRS, &vcache);
      auto vres = softmax_cross_entropy_with_logits(vlogits.values, labels4, sup4);
      dl.values = vres.dlogits;
      model.optical_backward(vcache, dl, {&grads.grads, 0});
    }
    CHECK(check_gradients(params, grads, loss_fn, 60, rng) == 60);
  }

  SUBCASE("SAR fused path through resize, shared block and head") {
    GradBuffer<double> grads(params);
    auto loss_fn = [&] {
      typename FusionModel<double>::SarFusedCache cache;
      auto logits = model.sar_fused_logits(sar, &cache);
      return softmax_cross_entropy_with_logits(logits.values, labels4, sup4).loss;
    };
    {
      typename FusionModel<double>::SarFusedCache cache;
      auto logits = model.sar_fused_logits(sar, &cache);
      auto res = softmax_cross_entropy_with_logits(logits.values, labels4, sup4);
      GridTensor<double> dl(4, 4, 3);
      dl.values = res.dlogits;
      model.sar_fused_backward(cache, dl, {&grads.grads, 0});
    }
    CHECK(check_gradients(params, grads, loss_fn, 60, rng) == 60);
  }
}

TEST_CASE("full regression loss gradients match finite differences") {
  RegressionConfig cfg;
  cfg.window = 3;
  cfg.embed_channels = 4;
  cfg.spatial = 4;
  cfg.pre1 = 4;
  cfg.pre2 = 3;
  cfg.pre3 = 2;
  cfg.post1 = 4;
  cfg.post2 = 3;
  cfg.post3 = 2;

  std::mt19937 rng(32);
  RegressionNet<double> net(cfg);
  net.init(rng);
  ParamList<double> params;
  net.collect_params("regression", params);

  // five entries over three days, duplicates so L_idc is active
  const int entries = 5;
  std::vector<std::vector<GridTensor<double>>> windows(entries);
  for (auto& w : windows)
    for (int s = 0; s < cfg.window; ++s) w.push_back(random_grid(4, 4, 4, rng));
  std::vector<int> day_group{0, 0, 1, 2, 2};
  VecX<double> targets(entries);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < entries; ++i) targets(i) = u(rng);
  LossWeights weights;

  auto forward_all = [&](std::vector<typename RegressionNet<double>::Cache>* caches) {
    VecX<double> preds(entries);
    for (int i = 0; i < entries; ++i)
      preds(i) = net.forward(windows[i], caches ? &(*caches)[i] : nullptr);
    return preds;
  };
  auto loss_fn = [&] {
    RegressionBatch<double> batch{forward_all(nullptr), targets, day_group};
    return regression_loss(batch, weights);
  };

  // keep away from the |.| kink of the line loss: redraw the inputs until
  // every prediction sits clearly off the fitted line
  for (int attempt = 0; attempt < 50; ++attempt) {
    VecX<double> preds = forward_all(nullptr);
    const auto fit = LineFit<double>::fit(preds);
    // i = 0 sits on the line by construction (a structural zero, not a
    // kink); every other deviation must be clearly nonzero
    double min_dev = 1e9;
    for (int i = 1; i < entries; ++i)
      min_dev = std::min(
          min_dev, std::abs(fit.slope * i + fit.intercept - preds(i)));
    if (min_dev > 1e-3) break;
    for (auto& w : windows)
      for (auto& slot : w) slot = random_grid(4, 4, 4, rng);
  }

  GradBuffer<double> grads(params);
  {
    std::vector<typename RegressionNet<double>::Cache> caches(entries);
    RegressionBatch<double> batch{forward_all(&caches), targets, day_group};
    VecX<double> dpred = regression_loss_grad(batch, weights);
    for (int i = 0; i < entries; ++i)
      net.backward(caches[i], dpred(i), {&grads.grads, 0});
  }
  CHECK(check_gradients(params, grads, loss_fn, 120, rng) == 120);
}
