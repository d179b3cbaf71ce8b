#include "lakeice/eval/metrics.hpp"

#include "lakeice/core/error.hpp"

namespace lakeice {

void ConfusionMatrix::accumulate(const LabelGrid& truth, const LabelGrid& pred,
                                 const std::vector<std::uint8_t>& supervised) {
  if (truth.classes.size() != pred.classes.size() ||
      truth.classes.size() != supervised.size())
    throw ContractError("ConfusionMatrix: size mismatch");
  for (std::size_t p = 0; p < truth.classes.size(); ++p)
    if (supervised[p])
      add(static_cast<PixelClass>(truth.classes[p]),
          static_cast<PixelClass>(pred.classes[p]));
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j) counts[i][j] += other.counts[i][j];
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t n = 0;
  for (const auto& row : counts)
    for (auto v : row) n += v;
  return n;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t n = 0;
  for (int i = 0; i < kNumClasses; ++i) n += counts[i][i];
  return n;
}

std::int64_t ConfusionMatrix::row_sum(int c) const {
  std::int64_t n = 0;
  for (auto v : counts[c]) n += v;
  return n;
}

std::int64_t ConfusionMatrix::col_sum(int c) const {
  std::int64_t n = 0;
  for (int i = 0; i < kNumClasses; ++i) n += counts[i][c];
  return n;
}

double mean_pixel_accuracy(const ConfusionMatrix& cm) {
  const std::int64_t n = cm.total();
  if (n == 0) throw DataError("mean_pixel_accuracy: empty confusion matrix");
  return 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(n);
}

double mean_iou(const ConfusionMatrix& cm) {
  double sum = 0;
  int present = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (cm.row_sum(c) == 0) continue;  // class absent from the labels
    const std::int64_t tp = cm.counts[c][c];
    const std::int64_t denom = cm.row_sum(c) + cm.col_sum(c) - tp;
    sum += denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
    ++present;
  }
  if (present == 0) throw DataError("mean_iou: no class present in labels");
  return 100.0 * sum / present;
}

}  // namespace lakeice
