#pragma once

#include <array>
#include <cstdint>

#include "lakeice/core/grid.hpp"

namespace lakeice {

// 3x3 counts over {frozen, non_frozen, background}, rows = reference,
// columns = prediction, accumulated over supervised pixels.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

  void add(PixelClass truth, PixelClass pred, std::int64_t n = 1) {
    counts[static_cast<int>(truth)][static_cast<int>(pred)] += n;
  }

  void accumulate(const LabelGrid& truth, const LabelGrid& pred,
                  const std::vector<std::uint8_t>& supervised);

  void merge(const ConfusionMatrix& other);

  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int c) const;
  std::int64_t col_sum(int c) const;
};

// 100 * trace / total.
double mean_pixel_accuracy(const ConfusionMatrix& cm);

// Mean of per-class IoU = TP / (TP + FP + FN), averaged over the classes
// present in the reference labels; absent classes are excluded.
double mean_iou(const ConfusionMatrix& cm);

}  // namespace lakeice
