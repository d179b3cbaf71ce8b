#pragma once

#include <random>
#include <string>

#include "lakeice/core/grid.hpp"
#include "lakeice/core/sensor.hpp"
#include "lakeice/nn/layers.hpp"
#include "lakeice/nn/params.hpp"

namespace lakeice {

// Architecture knobs for the step-1 network. Defaults follow the published
// model; tests shrink them to miniature sizes.
struct EncoderConfig {
  double leaky_alpha = 0.1;
  int feature_channels = 32;  // common branch output width K
  int embed_channels = 32;    // embedding width (two concatenated halves)
  int optical_size = 12;      // optical patch / embedding spatial size
  int sar_size = 128;         // SAR patch spatial size
  int sar_c1 = 16;            // U-net channel plan c1 -> c2 -> c3
  int sar_c2 = 32;
  int sar_c3 = 64;

  bool operator==(const EncoderConfig&) const = default;
};

template <typename Scalar>
struct GradView {
  std::vector<MatX<Scalar>>* slots = nullptr;
  std::size_t base = 0;
  MatX<Scalar>& operator[](std::size_t i) const { return (*slots)[base + i]; }
  GradView sub(std::size_t offset) const { return {slots, base + offset}; }
};

// 1x1 convolution encoder for the low-resolution optical branches.
template <typename Scalar>
struct OpticalEncoder {
  static constexpr std::size_t kNumParams = 2;

  Conv2D<Scalar> conv;
  Scalar alpha = Scalar(0.1);

  OpticalEncoder() = default;
  OpticalEncoder(int in_channels, const EncoderConfig& cfg)
      : conv(in_channels, cfg.feature_channels, 1),
        alpha(static_cast<Scalar>(cfg.leaky_alpha)) {}

  struct Cache {
    typename Conv2D<Scalar>::Cache conv;
    GridTensor<Scalar> preact;
  };

  void init(std::mt19937& rng) { conv.init(rng); }
  void collect_params(const std::string& p, ParamList<Scalar>& out) {
    conv.collect_params(p + ".conv", out);
  }

  GridTensor<Scalar> forward(const GridTensor<Scalar>& x, Cache* cache) const {
    Cache local;
    Cache* c = cache ? cache : &local;
    c->preact = conv.forward(x, &c->conv);
    return leaky_relu_forward(c->preact, alpha);
  }

  GridTensor<Scalar> backward(const Cache& cache, const GridTensor<Scalar>& dy,
                              GradView<Scalar> g) const {
    GridTensor<Scalar> dpre = leaky_relu_backward(cache.preact, dy, alpha);
    return conv.backward(cache.conv, dpre, g[0], g[1]);
  }
};

// U-net style SAR encoder: three encoder convs (two strided), symmetric
// decoder with skip concatenations, 1x1 projection with sigmoid output.
template <typename Scalar>
struct SarEncoder {
  static constexpr std::size_t kNumParams = 12;

  Conv2D<Scalar> enc1, down1, down2, up1, up2, out;
  Scalar alpha = Scalar(0.1);

  SarEncoder() = default;
  SarEncoder(int in_channels, const EncoderConfig& cfg)
      : enc1(in_channels, cfg.sar_c1, 3, 1),
        down1(cfg.sar_c1, cfg.sar_c2, 3, 2),
        down2(cfg.sar_c2, cfg.sar_c3, 3, 2),
        up1(cfg.sar_c3 + cfg.sar_c2, cfg.sar_c2, 3, 1),
        up2(cfg.sar_c2 + cfg.sar_c1, cfg.sar_c1, 3, 1),
        out(cfg.sar_c1, cfg.feature_channels, 1),
        alpha(static_cast<Scalar>(cfg.leaky_alpha)) {}

  struct Cache {
    typename Conv2D<Scalar>::Cache c_enc1, c_down1, c_down2, c_up1, c_up2, c_out;
    GridTensor<Scalar> enc1_pre, down1_pre, down2_pre, up1_pre, up2_pre;
    GridTensor<Scalar> enc1_act, down1_act;  // skip sources
    GridTensor<Scalar> sigmoid_out;
    int up1_in_channels = 0, up2_in_channels = 0;
  };

  void init(std::mt19937& rng) {
    enc1.init(rng);
    down1.init(rng);
    down2.init(rng);
    up1.init(rng);
    up2.init(rng);
    out.init(rng);
  }

  void collect_params(const std::string& p, ParamList<Scalar>& o) {
    enc1.collect_params(p + ".enc1", o);
    down1.collect_params(p + ".down1", o);
    down2.collect_params(p + ".down2", o);
    up1.collect_params(p + ".up1", o);
    up2.collect_params(p + ".up2", o);
    out.collect_params(p + ".out", o);
  }

  GridTensor<Scalar> forward(const GridTensor<Scalar>& x, Cache* cache) const {
    Cache local;
    Cache* c = cache ? cache : &local;
    c->enc1_pre = enc1.forward(x, &c->c_enc1);
    c->enc1_act = leaky_relu_forward(c->enc1_pre, alpha);
    c->down1_pre = down1.forward(c->enc1_act, &c->c_down1);
    c->down1_act = leaky_relu_forward(c->down1_pre, alpha);
    c->down2_pre = down2.forward(c->down1_act, &c->c_down2);
    GridTensor<Scalar> bottom = leaky_relu_forward(c->down2_pre, alpha);

    GridTensor<Scalar> cat1 =
        concat_channels(upsample2x_forward(bottom), c->down1_act);
    c->up1_in_channels = cat1.channels();
    c->up1_pre = up1.forward(cat1, &c->c_up1);
    GridTensor<Scalar> u1 = leaky_relu_forward(c->up1_pre, alpha);

    GridTensor<Scalar> cat2 =
        concat_channels(upsample2x_forward(u1), c->enc1_act);
    c->up2_in_channels = cat2.channels();
    c->up2_pre = up2.forward(cat2, &c->c_up2);
    GridTensor<Scalar> u2 = leaky_relu_forward(c->up2_pre, alpha);

    GridTensor<Scalar> z = out.forward(u2, &c->c_out);
    c->sigmoid_out = sigmoid_forward(z);
    return c->sigmoid_out;
  }

  GridTensor<Scalar> backward(const Cache& c, const GridTensor<Scalar>& dy,
                              GradView<Scalar> g) const {
    GridTensor<Scalar> dz = sigmoid_backward(c.sigmoid_out, dy);
    GridTensor<Scalar> du2 = out.backward(c.c_out, dz, g[10], g[11]);
    GridTensor<Scalar> dcat2 = up2.backward(
        c.c_up2, leaky_relu_backward(c.up2_pre, du2, alpha), g[8], g[9]);

    const int up_ch2 = c.up2_in_channels - c.enc1_act.channels();
    GridTensor<Scalar> dup2(dcat2.height, dcat2.width, up_ch2);
    dup2.values = dcat2.values.leftCols(up_ch2);
    GridTensor<Scalar> denc1_skip(dcat2.height, dcat2.width,
                                  c.enc1_act.channels());
    denc1_skip.values = dcat2.values.rightCols(c.enc1_act.channels());
    GridTensor<Scalar> du1 = upsample2x_backward(dup2);

    GridTensor<Scalar> dcat1 = up1.backward(
        c.c_up1, leaky_relu_backward(c.up1_pre, du1, alpha), g[6], g[7]);
    const int up_ch1 = c.up1_in_channels - c.down1_act.channels();
    GridTensor<Scalar> dbottom_up(dcat1.height, dcat1.width, up_ch1);
    dbottom_up.values = dcat1.values.leftCols(up_ch1);
    GridTensor<Scalar> ddown1_skip(dcat1.height, dcat1.width,
                                   c.down1_act.channels());
    ddown1_skip.values = dcat1.values.rightCols(c.down1_act.channels());
    GridTensor<Scalar> dbottom = upsample2x_backward(dbottom_up);

    GridTensor<Scalar> ddown1_act = down2.backward(
        c.c_down2, leaky_relu_backward(c.down2_pre, dbottom, alpha), g[4], g[5]);
    ddown1_act.values += ddown1_skip.values;

    GridTensor<Scalar> denc1_act = down1.backward(
        c.c_down1, leaky_relu_backward(c.down1_pre, ddown1_act, alpha), g[2],
        g[3]);
    denc1_act.values += denc1_skip.values;

    return enc1.backward(c.c_enc1,
                         leaky_relu_backward(c.enc1_pre, denc1_act, alpha),
                         g[0], g[1]);
  }
};

// Shallow shared block: two 1x1-conv stages whose outputs are concatenated
// into the embedding. Single instance, same weights for every sensor.
template <typename Scalar>
struct SharedBlock {
  static constexpr std::size_t kNumParams = 4;

  Conv2D<Scalar> conv1, conv2;
  Scalar alpha = Scalar(0.1);

  SharedBlock() = default;
  explicit SharedBlock(const EncoderConfig& cfg)
      : conv1(cfg.feature_channels, cfg.embed_channels / 2, 1),
        conv2(cfg.feature_channels + cfg.embed_channels / 2,
              cfg.embed_channels / 2, 1),
        alpha(static_cast<Scalar>(cfg.leaky_alpha)) {}

  struct Cache {
    typename Conv2D<Scalar>::Cache c1, c2;
    GridTensor<Scalar> pre1, pre2;
    int in_channels = 0;
  };

  void init(std::mt19937& rng) {
    conv1.init(rng);
    conv2.init(rng);
  }

  void collect_params(const std::string& p, ParamList<Scalar>& o) {
    conv1.collect_params(p + ".conv1", o);
    conv2.collect_params(p + ".conv2", o);
  }

  GridTensor<Scalar> forward(const GridTensor<Scalar>& feat,
                             Cache* cache) const {
    Cache local;
    Cache* c = cache ? cache : &local;
    c->in_channels = feat.channels();
    c->pre1 = conv1.forward(feat, &c->c1);
    GridTensor<Scalar> a = leaky_relu_forward(c->pre1, alpha);
    GridTensor<Scalar> cat = concat_channels(feat, a);
    c->pre2 = conv2.forward(cat, &c->c2);
    GridTensor<Scalar> b = leaky_relu_forward(c->pre2, alpha);
    return concat_channels(a, b);
  }

  GridTensor<Scalar> backward(const Cache& c, const GridTensor<Scalar>& demb,
                              GradView<Scalar> g) const {
    const int half = static_cast<int>(demb.channels()) / 2;
    GridTensor<Scalar> da(demb.height, demb.width, half);
    da.values = demb.values.leftCols(half);
    GridTensor<Scalar> db(demb.height, demb.width, half);
    db.values = demb.values.rightCols(half);

    GridTensor<Scalar> dcat = conv2.backward(
        c.c2, leaky_relu_backward(c.pre2, db, alpha), g[2], g[3]);
    GridTensor<Scalar> dfeat(dcat.height, dcat.width, c.in_channels);
    dfeat.values = dcat.values.leftCols(c.in_channels);
    da.values += dcat.values.rightCols(half);

    dfeat.values += conv1
                        .backward(c.c1, leaky_relu_backward(c.pre1, da, alpha),
                                  g[0], g[1])
                        .values;
    return dfeat;
  }
};

// Per-pixel classifier head over the embedding: 1x1 conv to class logits.
template <typename Scalar>
struct SegmentationHead {
  static constexpr std::size_t kNumParams = 2;

  Conv2D<Scalar> conv;

  SegmentationHead() = default;
  explicit SegmentationHead(int in_channels)
      : conv(in_channels, kNumClasses, 1) {}

  struct Cache {
    typename Conv2D<Scalar>::Cache conv;
  };

  void init(std::mt19937& rng) { conv.init(rng); }
  void collect_params(const std::string& p, ParamList<Scalar>& o) {
    conv.collect_params(p + ".conv", o);
  }

  GridTensor<Scalar> logits(const GridTensor<Scalar>& emb, Cache* cache) const {
    Cache local;
    Cache* c = cache ? cache : &local;
    return conv.forward(emb, &c->conv);
  }

  GridTensor<Scalar> backward(const Cache& c, const GridTensor<Scalar>& dlogits,
                              GradView<Scalar> g) const {
    return conv.backward(c.conv, dlogits, g[0], g[1]);
  }
};

// Per-pixel probabilities (softmax over classes) for an embedding.
template <typename Scalar>
GridTensor<Scalar> segment(const SegmentationHead<Scalar>& head,
                           const GridTensor<Scalar>& emb) {
  GridTensor<Scalar> logits = head.logits(emb, nullptr);
  logits.values = softmax_rows(logits.values);
  return logits;
}

template <typename Scalar>
LabelGrid argmax_classes(const GridTensor<Scalar>& probs) {
  LabelGrid g(probs.height, probs.width);
  for (int p = 0; p < probs.pixels(); ++p) {
    Eigen::Index best = 0;
    probs.values.row(p).maxCoeff(&best);
    g.classes[p] = static_cast<std::uint8_t>(best);
  }
  return g;
}

// Fraction of valid lake pixels predicted non-frozen (open water).
inline double water_fraction_from_map(const LabelGrid& classes,
                                      const Mask& valid) {
  int n_valid = 0, n_water = 0;
  for (std::size_t p = 0; p < classes.classes.size(); ++p) {
    if (!valid.bits[p]) continue;
    ++n_valid;
    if (classes.classes[p] == static_cast<std::uint8_t>(PixelClass::NonFrozen))
      ++n_water;
  }
  if (n_valid == 0) throw DataError("water_fraction_from_map: no valid pixels");
  return static_cast<double>(n_water) / n_valid;
}

}  // namespace lakeice
