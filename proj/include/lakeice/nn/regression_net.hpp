#pragma once

#include <random>
#include <vector>

#include "lakeice/core/grid.hpp"
#include "lakeice/nn/embedding_net.hpp"
#include "lakeice/nn/layers.hpp"

namespace lakeice {

struct RegressionConfig {
  int window = 7;  // previous 3, current, next 3
  int embed_channels = 32;
  int spatial = 12;
  int pre1 = 32, pre2 = 16, pre3 = 8;     // per-day conv widths
  int post1 = 64, post2 = 32, post3 = 16;  // after the reshape
  double leaky_alpha = 0.1;

  bool operator==(const RegressionConfig&) const = default;
};

// Step-2 network: three 3x3 convs applied independently (shared weights)
// to each per-day embedding, a reshape that collapses time and channels
// into one channel axis, three more 3x3 convs, and a fully connected layer
// squashed to a scalar in [0,1].
template <typename Scalar>
struct RegressionNet {
  static constexpr std::size_t kNumParams = 14;

  RegressionConfig cfg;
  Conv2D<Scalar> pre1, pre2, pre3, post1, post2, post3;
  MatX<Scalar> fc_weight;  // (spatial^2 * post3) x 1
  MatX<Scalar> fc_bias;    // 1 x 1
  Scalar alpha = Scalar(0.1);

  RegressionNet() = default;
  explicit RegressionNet(const RegressionConfig& c)
      : cfg(c),
        pre1(c.embed_channels, c.pre1, 3),
        pre2(c.pre1, c.pre2, 3),
        pre3(c.pre2, c.pre3, 3),
        post1(c.window * c.pre3, c.post1, 3),
        post2(c.post1, c.post2, 3),
        post3(c.post2, c.post3, 3),
        fc_weight(c.spatial * c.spatial * c.post3, 1),
        fc_bias(1, 1),
        alpha(static_cast<Scalar>(c.leaky_alpha)) {
    fc_weight.setZero();
    fc_bias.setZero();
  }

  void init(std::mt19937& rng) {
    pre1.init(rng);
    pre2.init(rng);
    pre3.init(rng);
    post1.init(rng);
    post2.init(rng);
    post3.init(rng);
    glorot_uniform(fc_weight, static_cast<int>(fc_weight.rows()), 1, rng);
    fc_bias.setZero();
  }

  void collect_params(const std::string& p, ParamList<Scalar>& o) {
    pre1.collect_params(p + ".pre1", o);
    pre2.collect_params(p + ".pre2", o);
    pre3.collect_params(p + ".pre3", o);
    post1.collect_params(p + ".post1", o);
    post2.collect_params(p + ".post2", o);
    post3.collect_params(p + ".post3", o);
    o.push_back({p + ".fc.weight", &fc_weight});
    o.push_back({p + ".fc.bias", &fc_bias});
  }

  struct SlotCache {
    typename Conv2D<Scalar>::Cache c1, c2, c3;
    GridTensor<Scalar> pre1_out, pre2_out, pre3_out;
  };

  struct Cache {
    std::vector<SlotCache> slots;
    typename Conv2D<Scalar>::Cache c4, c5, c6;
    GridTensor<Scalar> post1_out, post2_out, post3_out;
    VecX<Scalar> flat;
    Scalar y = 0;
  };

  Scalar forward(const std::vector<GridTensor<Scalar>>& window,
                 Cache* cache) const {
    if (static_cast<int>(window.size()) != cfg.window)
      throw ContractError("RegressionNet: window size mismatch");
    Cache local;
    Cache* c = cache ? cache : &local;
    c->slots.resize(window.size());

    GridTensor<Scalar> stacked(cfg.spatial, cfg.spatial,
                               cfg.window * cfg.pre3);
    for (std::size_t s = 0; s < window.size(); ++s) {
      if (window[s].height != cfg.spatial || window[s].width != cfg.spatial ||
          window[s].channels() != cfg.embed_channels)
        throw ContractError("RegressionNet: embedding shape mismatch");
      SlotCache& sc = c->slots[s];
      sc.pre1_out = pre1.forward(window[s], &sc.c1);
      GridTensor<Scalar> a1 = leaky_relu_forward(sc.pre1_out, alpha);
      sc.pre2_out = pre2.forward(a1, &sc.c2);
      GridTensor<Scalar> a2 = leaky_relu_forward(sc.pre2_out, alpha);
      sc.pre3_out = pre3.forward(a2, &sc.c3);
      GridTensor<Scalar> a3 = leaky_relu_forward(sc.pre3_out, alpha);
      stacked.values.middleCols(static_cast<int>(s) * cfg.pre3, cfg.pre3) =
          a3.values;
    }

    c->post1_out = post1.forward(stacked, &c->c4);
    GridTensor<Scalar> b1 = leaky_relu_forward(c->post1_out, alpha);
    c->post2_out = post2.forward(b1, &c->c5);
    GridTensor<Scalar> b2 = leaky_relu_forward(c->post2_out, alpha);
    c->post3_out = post3.forward(b2, &c->c6);
    GridTensor<Scalar> b3 = leaky_relu_forward(c->post3_out, alpha);

    c->flat = Eigen::Map<const VecX<Scalar>>(b3.values.data(),
                                             b3.values.size());
    const Scalar z = (c->flat.transpose() * fc_weight)(0, 0) + fc_bias(0, 0);
    c->y = Scalar(1) / (Scalar(1) + std::exp(-z));
    return c->y;
  }

  // dLoss/dprediction in, parameter gradients out (embeddings are frozen
  // inputs in step 2, so input gradients are not propagated further).
  void backward(const Cache& c, Scalar dy, GradView<Scalar> g) const {
    const Scalar dz = dy * c.y * (Scalar(1) - c.y);
    g[12] += dz * c.flat;
    g[13](0, 0) += dz;

    VecX<Scalar> dflat = dz * fc_weight;
    GridTensor<Scalar> db3(cfg.spatial, cfg.spatial, cfg.post3);
    db3.values = Eigen::Map<const MatX<Scalar>>(dflat.data(),
                                                cfg.spatial * cfg.spatial,
                                                cfg.post3);
    GridTensor<Scalar> db2 = post3.backward(
        c.c6, leaky_relu_backward(c.post3_out, db3, alpha), g[10], g[11]);
    GridTensor<Scalar> db1 = post2.backward(
        c.c5, leaky_relu_backward(c.post2_out, db2, alpha), g[8], g[9]);
    GridTensor<Scalar> dstacked = post1.backward(
        c.c4, leaky_relu_backward(c.post1_out, db1, alpha), g[6], g[7]);

    for (std::size_t s = 0; s < c.slots.size(); ++s) {
      const SlotCache& sc = c.slots[s];
      GridTensor<Scalar> da3(cfg.spatial, cfg.spatial, cfg.pre3);
      da3.values =
          dstacked.values.middleCols(static_cast<int>(s) * cfg.pre3, cfg.pre3);
      GridTensor<Scalar> da2 = pre3.backward(
          sc.c3, leaky_relu_backward(sc.pre3_out, da3, alpha), g[4], g[5]);
      GridTensor<Scalar> da1 = pre2.backward(
          sc.c2, leaky_relu_backward(sc.pre2_out, da2, alpha), g[2], g[3]);
      pre1.backward(sc.c1, leaky_relu_backward(sc.pre1_out, da1, alpha), g[0],
                    g[1]);
    }
  }
};

}  // namespace lakeice
