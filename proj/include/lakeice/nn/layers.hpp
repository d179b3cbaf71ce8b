#pragma once

#include <random>
#include <string>

#include "lakeice/core/grid.hpp"
#include "lakeice/nn/init.hpp"
#include "lakeice/nn/params.hpp"

namespace lakeice {

// 2-D convolution on GridTensor data. Weight layout is
// (in_channels * ksize * ksize) x out_channels with the row index
// c * ksize^2 + ky * ksize + kx, so forward is one GEMM on the im2col
// matrix. "Same" padding: pad = (ksize - 1) / 2.
template <typename Scalar>
struct Conv2D {
  int in_channels = 0;
  int out_channels = 0;
  int ksize = 1;
  int stride = 1;
  MatX<Scalar> weight;
  MatX<Scalar> bias;  // 1 x out_channels

  struct Cache {
    MatX<Scalar> cols;  // im2col matrix (or input values for 1x1)
    int in_h = 0, in_w = 0, out_h = 0, out_w = 0;
  };

  Conv2D() = default;
  Conv2D(int cin, int cout, int k, int s = 1)
      : in_channels(cin),
        out_channels(cout),
        ksize(k),
        stride(s),
        weight(cin * k * k, cout),
        bias(1, cout) {
    weight.setZero();
    bias.setZero();
  }

  int pad() const { return (ksize - 1) / 2; }
  int out_size(int in) const { return (in + 2 * pad() - ksize) / stride + 1; }

  void init(std::mt19937& rng) {
    glorot_uniform(weight, in_channels * ksize * ksize,
                   out_channels * ksize * ksize, rng);
    bias.setZero();
  }

  void collect_params(const std::string& prefix, ParamList<Scalar>& out) {
    out.push_back({prefix + ".weight", &weight});
    out.push_back({prefix + ".bias", &bias});
  }

  GridTensor<Scalar> forward(const GridTensor<Scalar>& x, Cache* cache) const {
    if (x.channels() != in_channels)
      throw ContractError("Conv2D: channel mismatch");
    const int oh = out_size(x.height);
    const int ow = out_size(x.width);
    GridTensor<Scalar> y(oh, ow, out_channels);
    if (ksize == 1 && stride == 1) {
      y.values.noalias() = x.values * weight;
      y.values.rowwise() += bias.row(0);
      if (cache) {
        cache->cols = x.values;
        cache->in_h = x.height;
        cache->in_w = x.width;
        cache->out_h = oh;
        cache->out_w = ow;
      }
      return y;
    }
    MatX<Scalar> cols = im2col(x, oh, ow);
    y.values.noalias() = cols * weight;
    y.values.rowwise() += bias.row(0);
    if (cache) {
      cache->cols = std::move(cols);
      cache->in_h = x.height;
      cache->in_w = x.width;
      cache->out_h = oh;
      cache->out_w = ow;
    }
    return y;
  }

  // Accumulates parameter gradients into dweight/dbias, returns dx.
  GridTensor<Scalar> backward(const Cache& cache, const GridTensor<Scalar>& dy,
                              MatX<Scalar>& dweight, MatX<Scalar>& dbias) const {
    dweight.noalias() += cache.cols.transpose() * dy.values;
    dbias.row(0) += dy.values.colwise().sum();
    GridTensor<Scalar> dx(cache.in_h, cache.in_w, in_channels);
    if (ksize == 1 && stride == 1) {
      dx.values.noalias() = dy.values * weight.transpose();
      return dx;
    }
    MatX<Scalar> dcols(cache.cols.rows(), cache.cols.cols());
    dcols.noalias() = dy.values * weight.transpose();
    col2im(dcols, dx, cache.out_h, cache.out_w);
    return dx;
  }

 private:
  MatX<Scalar> im2col(const GridTensor<Scalar>& x, int oh, int ow) const {
    MatX<Scalar> cols = MatX<Scalar>::Zero(oh * ow, in_channels * ksize * ksize);
    const int p = pad();
    for (int c = 0; c < in_channels; ++c) {
      for (int ky = 0; ky < ksize; ++ky) {
        for (int kx = 0; kx < ksize; ++kx) {
          const int col_idx = (c * ksize + ky) * ksize + kx;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride - p + ky;
            if (iy < 0 || iy >= x.height) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride - p + kx;
              if (ix < 0 || ix >= x.width) continue;
              cols(oy * ow + ox, col_idx) = x.values(iy * x.width + ix, c);
            }
          }
        }
      }
    }
    return cols;
  }

  void col2im(const MatX<Scalar>& dcols, GridTensor<Scalar>& dx, int oh,
              int ow) const {
    const int p = pad();
    for (int c = 0; c < in_channels; ++c) {
      for (int ky = 0; ky < ksize; ++ky) {
        for (int kx = 0; kx < ksize; ++kx) {
          const int col_idx = (c * ksize + ky) * ksize + kx;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride - p + ky;
            if (iy < 0 || iy >= dx.height) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride - p + kx;
              if (ix < 0 || ix >= dx.width) continue;
              dx.values(iy * dx.width + ix, c) += dcols(oy * ow + ox, col_idx);
            }
          }
        }
      }
    }
  }
};

template <typename Scalar>
GridTensor<Scalar> leaky_relu_forward(const GridTensor<Scalar>& x,
                                      Scalar alpha) {
  GridTensor<Scalar> y = x;
  y.values = x.values.unaryExpr(
      [alpha](Scalar v) { return v >= Scalar(0) ? v : alpha * v; });
  return y;
}

template <typename Scalar>
GridTensor<Scalar> leaky_relu_backward(const GridTensor<Scalar>& x,
                                       const GridTensor<Scalar>& dy,
                                       Scalar alpha) {
  GridTensor<Scalar> dx = dy;
  dx.values.array() *=
      x.values
          .unaryExpr([alpha](Scalar v) { return v >= Scalar(0) ? Scalar(1) : alpha; })
          .array();
  return dx;
}

template <typename Scalar>
GridTensor<Scalar> sigmoid_forward(const GridTensor<Scalar>& x) {
  GridTensor<Scalar> y = x;
  y.values = x.values.unaryExpr(
      [](Scalar v) { return Scalar(1) / (Scalar(1) + std::exp(-v)); });
  return y;
}

// Takes the forward output, not the input.
template <typename Scalar>
GridTensor<Scalar> sigmoid_backward(const GridTensor<Scalar>& y,
                                    const GridTensor<Scalar>& dy) {
  GridTensor<Scalar> dx = dy;
  dx.values.array() *= (y.values.array() * (Scalar(1) - y.values.array()));
  return dx;
}

// Nearest-neighbour 2x upsampling (decoder path); parameter-free.
template <typename Scalar>
GridTensor<Scalar> upsample2x_forward(const GridTensor<Scalar>& x) {
  GridTensor<Scalar> y(x.height * 2, x.width * 2, x.channels());
  for (int oy = 0; oy < y.height; ++oy)
    for (int ox = 0; ox < y.width; ++ox)
      y.values.row(oy * y.width + ox) =
          x.values.row((oy / 2) * x.width + (ox / 2));
  return y;
}

template <typename Scalar>
GridTensor<Scalar> upsample2x_backward(const GridTensor<Scalar>& dy) {
  GridTensor<Scalar> dx(dy.height / 2, dy.width / 2, dy.channels());
  for (int oy = 0; oy < dy.height; ++oy)
    for (int ox = 0; ox < dy.width; ++ox)
      dx.values.row((oy / 2) * dx.width + (ox / 2)) +=
          dy.values.row(oy * dy.width + ox);
  return dx;
}

// Row-wise (per-pixel) softmax over channels, numerically stabilized.
template <typename Scalar>
MatX<Scalar> softmax_rows(const MatX<Scalar>& logits) {
  MatX<Scalar> p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const Scalar mx = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - mx).exp();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

}  // namespace lakeice
