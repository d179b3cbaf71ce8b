#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "lakeice/core/error.hpp"

namespace lakeice {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense H x W x C grid. Pixels are rows (row-major y*W+x), channels are
// columns, so per-channel planes are contiguous and pointwise layers are
// plain GEMMs on .values.
template <typename Scalar>
struct GridTensor {
  int height = 0;
  int width = 0;
  MatX<Scalar> values;  // (height*width) x channels

  GridTensor() = default;
  GridTensor(int h, int w, int c) : height(h), width(w), values(h * w, c) {
    values.setZero();
  }

  int channels() const { return static_cast<int>(values.cols()); }
  int pixels() const { return height * width; }
  int index(int y, int x) const { return y * width + x; }

  Scalar& at(int y, int x, int c) { return values(index(y, x), c); }
  Scalar at(int y, int x, int c) const { return values(index(y, x), c); }

  template <typename Other>
  GridTensor<Other> cast() const {
    GridTensor<Other> out;
    out.height = height;
    out.width = width;
    out.values = values.template cast<Other>();
    return out;
  }
};

template <typename Scalar>
GridTensor<Scalar> concat_channels(const GridTensor<Scalar>& a,
                                   const GridTensor<Scalar>& b) {
  if (a.height != b.height || a.width != b.width)
    throw ContractError("concat_channels: spatial shape mismatch");
  GridTensor<Scalar> out(a.height, a.width, a.channels() + b.channels());
  out.values.leftCols(a.channels()) = a.values;
  out.values.rightCols(b.channels()) = b.values;
  return out;
}

// Boolean pixel mask over an H x W grid.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int h, int w) : height(h), width(w), bits(h * w, 0) {}

  bool at(int y, int x) const { return bits[y * width + x] != 0; }
  void set(int y, int x, bool v) { bits[y * width + x] = v ? 1 : 0; }
  int count() const {
    int n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

// Per-pixel class ids for the segmentation task.
enum class PixelClass : std::uint8_t { Frozen = 0, NonFrozen = 1, Background = 2 };
inline constexpr int kNumClasses = 3;

struct LabelGrid {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> classes;

  LabelGrid() = default;
  LabelGrid(int h, int w, PixelClass fill = PixelClass::Background)
      : height(h), width(w), classes(h * w, static_cast<std::uint8_t>(fill)) {}

  PixelClass at(int y, int x) const {
    return static_cast<PixelClass>(classes[y * width + x]);
  }
  void set(int y, int x, PixelClass c) {
    classes[y * width + x] = static_cast<std::uint8_t>(c);
  }
};

// Precomputed bilinear interpolation from one grid size to another.
// Half-pixel-center convention: src = (dst + 0.5) * scale - 0.5, clamped.
// The map is linear in the input, so backward is the exact transpose.
class ResizePlan {
 public:
  ResizePlan() = default;
  ResizePlan(int src_h, int src_w, int dst_h, int dst_w)
      : src_h_(src_h), src_w_(src_w), dst_h_(dst_h), dst_w_(dst_w) {
    build_axis(src_h, dst_h, y0_, y1_, wy_);
    build_axis(src_w, dst_w, x0_, x1_, wx_);
  }

  int src_pixels() const { return src_h_ * src_w_; }
  int dst_pixels() const { return dst_h_ * dst_w_; }

  template <typename Scalar>
  GridTensor<Scalar> forward(const GridTensor<Scalar>& in) const {
    if (in.height != src_h_ || in.width != src_w_)
      throw ContractError("ResizePlan: input shape mismatch");
    GridTensor<Scalar> out(dst_h_, dst_w_, in.channels());
    for (int y = 0; y < dst_h_; ++y) {
      const Scalar fy = static_cast<Scalar>(wy_[y]);
      for (int x = 0; x < dst_w_; ++x) {
        const Scalar fx = static_cast<Scalar>(wx_[x]);
        const int r = y * dst_w_ + x;
        out.values.row(r) =
            (1 - fy) * ((1 - fx) * in.values.row(y0_[y] * src_w_ + x0_[x]) +
                        fx * in.values.row(y0_[y] * src_w_ + x1_[x])) +
            fy * ((1 - fx) * in.values.row(y1_[y] * src_w_ + x0_[x]) +
                  fx * in.values.row(y1_[y] * src_w_ + x1_[x]));
      }
    }
    return out;
  }

  template <typename Scalar>
  GridTensor<Scalar> backward(const GridTensor<Scalar>& grad_out) const {
    if (grad_out.height != dst_h_ || grad_out.width != dst_w_)
      throw ContractError("ResizePlan: gradient shape mismatch");
    GridTensor<Scalar> grad_in(src_h_, src_w_, grad_out.channels());
    for (int y = 0; y < dst_h_; ++y) {
      const Scalar fy = static_cast<Scalar>(wy_[y]);
      for (int x = 0; x < dst_w_; ++x) {
        const Scalar fx = static_cast<Scalar>(wx_[x]);
        const auto g = grad_out.values.row(y * dst_w_ + x);
        grad_in.values.row(y0_[y] * src_w_ + x0_[x]) += (1 - fy) * (1 - fx) * g;
        grad_in.values.row(y0_[y] * src_w_ + x1_[x]) += (1 - fy) * fx * g;
        grad_in.values.row(y1_[y] * src_w_ + x0_[x]) += fy * (1 - fx) * g;
        grad_in.values.row(y1_[y] * src_w_ + x1_[x]) += fy * fx * g;
      }
    }
    return grad_in;
  }

 private:
  static void build_axis(int src, int dst, std::vector<int>& i0,
                         std::vector<int>& i1, std::vector<double>& w) {
    i0.resize(dst);
    i1.resize(dst);
    w.resize(dst);
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double pos = (i + 0.5) * scale - 0.5;
      if (pos < 0) pos = 0;
      if (pos > src - 1) pos = src - 1;
      i0[i] = static_cast<int>(pos);
      i1[i] = i0[i] + 1 < src ? i0[i] + 1 : i0[i];
      w[i] = pos - i0[i];
    }
  }

  int src_h_ = 0, src_w_ = 0, dst_h_ = 0, dst_w_ = 0;
  std::vector<int> y0_, y1_, x0_, x1_;
  std::vector<double> wy_, wx_;
};

}  // namespace lakeice
