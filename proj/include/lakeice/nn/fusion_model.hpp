#pragma once

#include <random>

#include "lakeice/core/date.hpp"
#include "lakeice/core/grid.hpp"
#include "lakeice/core/sensor.hpp"
#include "lakeice/nn/embedding_net.hpp"
#include "lakeice/nn/losses.hpp"

namespace lakeice {

// The shared 12x12x32 latent representation plus its provenance.
struct Embedding {
  GridTensor<float> values;
  SensorKind sensor = SensorKind::MODIS;
  Date date;
};

// Per-channel standardization statistics for the optical branches,
// computed on the training split and stored in the checkpoint.
template <typename Scalar>
struct ChannelStats {
  MatX<Scalar> mean;  // 1 x C
  MatX<Scalar> std;   // 1 x C

  void identity(int channels) {
    mean = MatX<Scalar>::Zero(1, channels);
    std = MatX<Scalar>::Ones(1, channels);
  }

  GridTensor<Scalar> apply(const GridTensor<Scalar>& x) const {
    GridTensor<Scalar> y = x;
    y.values.array().rowwise() -= mean.row(0).array();
    y.values.array().rowwise() /= std.row(0).array();
    return y;
  }
};

// Step-1 network: the three encoder branches, the weight-shared block, the
// segmentation head, and the native-resolution auxiliary head used only
// during SAR encoder pre-training.
template <typename Scalar>
struct FusionModel {
  // parameter slot offsets inside the full GradBuffer / ParamList
  static constexpr std::size_t kSarBase = 0;
  static constexpr std::size_t kModisBase = SarEncoder<Scalar>::kNumParams;
  static constexpr std::size_t kViirsBase =
      kModisBase + OpticalEncoder<Scalar>::kNumParams;
  static constexpr std::size_t kSharedBase =
      kViirsBase + OpticalEncoder<Scalar>::kNumParams;
  static constexpr std::size_t kSegBase =
      kSharedBase + SharedBlock<Scalar>::kNumParams;
  static constexpr std::size_t kAuxBase =
      kSegBase + SegmentationHead<Scalar>::kNumParams;
  static constexpr std::size_t kTotalParams =
      kAuxBase + SegmentationHead<Scalar>::kNumParams;

  EncoderConfig cfg;
  SarEncoder<Scalar> sar_encoder;
  OpticalEncoder<Scalar> modis_encoder, viirs_encoder;
  SharedBlock<Scalar> shared_block;
  SegmentationHead<Scalar> seg_head;
  SegmentationHead<Scalar> sar_aux_head;
  ChannelStats<Scalar> modis_stats, viirs_stats;
  ResizePlan sar_resize;  // parameter-free bilinear 128 -> 12

  FusionModel() = default;
  explicit FusionModel(const EncoderConfig& config,
                       int modis_channels = traits(SensorKind::MODIS).channels,
                       int viirs_channels = traits(SensorKind::VIIRS).channels,
                       int sar_channels = traits(SensorKind::SAR).channels)
      : cfg(config),
        sar_encoder(sar_channels, config),
        modis_encoder(modis_channels, config),
        viirs_encoder(viirs_channels, config),
        shared_block(config),
        seg_head(config.embed_channels),
        sar_aux_head(config.feature_channels),
        sar_resize(config.sar_size, config.sar_size, config.optical_size,
                   config.optical_size) {
    modis_stats.identity(modis_channels);
    viirs_stats.identity(viirs_channels);
  }

  void init(std::mt19937& rng) {
    sar_encoder.init(rng);
    modis_encoder.init(rng);
    viirs_encoder.init(rng);
    shared_block.init(rng);
    seg_head.init(rng);
    sar_aux_head.init(rng);
  }

  ParamList<Scalar> params() {
    ParamList<Scalar> out;
    sar_encoder.collect_params("sar_encoder", out);
    modis_encoder.collect_params("modis_encoder", out);
    viirs_encoder.collect_params("viirs_encoder", out);
    shared_block.collect_params("shared_block", out);
    seg_head.collect_params("segmentation_head", out);
    sar_aux_head.collect_params("sar_aux_head", out);
    return out;
  }

  const OpticalEncoder<Scalar>& optical_encoder(SensorKind k) const {
    if (k == SensorKind::MODIS) return modis_encoder;
    if (k == SensorKind::VIIRS) return viirs_encoder;
    throw ContractError("optical_encoder: not an optical sensor");
  }

  const ChannelStats<Scalar>& stats(SensorKind k) const {
    if (k == SensorKind::MODIS) return modis_stats;
    if (k == SensorKind::VIIRS) return viirs_stats;
    throw ContractError("stats: not an optical sensor");
  }

  // ---- inference ----

  GridTensor<Scalar> encode_optical(const GridTensor<Scalar>& raw,
                                    SensorKind k) const {
    return optical_encoder(k).forward(stats(k).apply(raw), nullptr);
  }

  // Native-resolution SAR features (sigmoid-bounded), before the resize.
  GridTensor<Scalar> encode_sar(const GridTensor<Scalar>& raw) const {
    if (raw.height != cfg.sar_size || raw.width != cfg.sar_size)
      throw ContractError("encode_sar: not a SAR patch");
    return sar_encoder.forward(raw, nullptr);
  }

  GridTensor<Scalar> shared_embed(const GridTensor<Scalar>& features) const {
    if (features.height != cfg.optical_size ||
        features.width != cfg.optical_size ||
        features.channels() != cfg.feature_channels)
      throw ContractError("shared_embed: feature shape mismatch");
    return shared_block.forward(features, nullptr);
  }

  GridTensor<Scalar> embed(const GridTensor<Scalar>& raw, SensorKind k) const {
    if (k == SensorKind::SAR)
      return shared_embed(sar_resize.forward(encode_sar(raw)));
    return shared_embed(encode_optical(raw, k));
  }

  // ---- training paths (forward with cache + backward into grad slots) ----

  struct OpticalPathCache {
    typename OpticalEncoder<Scalar>::Cache enc;
    typename SharedBlock<Scalar>::Cache shared;
    typename SegmentationHead<Scalar>::Cache seg;
    SensorKind sensor = SensorKind::MODIS;
  };

  GridTensor<Scalar> optical_logits(const GridTensor<Scalar>& raw, SensorKind k,
                                    OpticalPathCache* c) const {
    c->sensor = k;
    GridTensor<Scalar> feat =
        optical_encoder(k).forward(stats(k).apply(raw), &c->enc);
    GridTensor<Scalar> emb = shared_block.forward(feat, &c->shared);
    return seg_head.logits(emb, &c->seg);
  }

  void optical_backward(const OpticalPathCache& c,
                        const GridTensor<Scalar>& dlogits,
                        GradView<Scalar> g) const {
    GridTensor<Scalar> demb = seg_head.backward(c.seg, dlogits, g.sub(kSegBase));
    GridTensor<Scalar> dfeat =
        shared_block.backward(c.shared, demb, g.sub(kSharedBase));
    const std::size_t base =
        c.sensor == SensorKind::MODIS ? kModisBase : kViirsBase;
    optical_encoder(c.sensor).backward(c.enc, dfeat, g.sub(base));
  }

  struct SarNativeCache {
    typename SarEncoder<Scalar>::Cache enc;
    typename SegmentationHead<Scalar>::Cache aux;
  };

  GridTensor<Scalar> sar_native_logits(const GridTensor<Scalar>& raw,
                                       SarNativeCache* c) const {
    GridTensor<Scalar> feat = sar_encoder.forward(raw, &c->enc);
    return sar_aux_head.logits(feat, &c->aux);
  }

  void sar_native_backward(const SarNativeCache& c,
                           const GridTensor<Scalar>& dlogits,
                           GradView<Scalar> g) const {
    GridTensor<Scalar> dfeat =
        sar_aux_head.backward(c.aux, dlogits, g.sub(kAuxBase));
    sar_encoder.backward(c.enc, dfeat, g.sub(kSarBase));
  }

  struct SarFusedCache {
    typename SarEncoder<Scalar>::Cache enc;
    typename SharedBlock<Scalar>::Cache shared;
    typename SegmentationHead<Scalar>::Cache seg;
  };

  GridTensor<Scalar> sar_fused_logits(const GridTensor<Scalar>& raw,
                                      SarFusedCache* c) const {
    GridTensor<Scalar> feat = sar_encoder.forward(raw, &c->enc);
    GridTensor<Scalar> resized = sar_resize.forward(feat);
    GridTensor<Scalar> emb = shared_block.forward(resized, &c->shared);
    return seg_head.logits(emb, &c->seg);
  }

  void sar_fused_backward(const SarFusedCache& c,
                          const GridTensor<Scalar>& dlogits,
                          GradView<Scalar> g) const {
    GridTensor<Scalar> demb = seg_head.backward(c.seg, dlogits, g.sub(kSegBase));
    GridTensor<Scalar> dresized =
        shared_block.backward(c.shared, demb, g.sub(kSharedBase));
    GridTensor<Scalar> dfeat = sar_resize.backward(dresized);
    sar_encoder.backward(c.enc, dfeat, g.sub(kSarBase));
  }
};

}  // namespace lakeice
