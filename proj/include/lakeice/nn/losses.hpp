#pragma once

#include <cmath>
#include <vector>

#include "lakeice/core/error.hpp"
#include "lakeice/core/grid.hpp"
#include "lakeice/nn/layers.hpp"

namespace lakeice {

// Published loss weights: L_reg = L_mse + beta * L_line + gamma * L_idc.
struct LossWeights {
  double beta = 0.25;
  double gamma = 0.08;
};

// Pixels that carry a supervision signal: background pixels plus clean,
// cloud-free (valid) lake pixels. Cloud-masked lake pixels are excluded.
inline std::vector<std::uint8_t> supervision_mask(const LabelGrid& labels,
                                                  const Mask& valid) {
  std::vector<std::uint8_t> sup(labels.classes.size(), 0);
  for (std::size_t p = 0; p < sup.size(); ++p) {
    const bool background =
        labels.classes[p] == static_cast<std::uint8_t>(PixelClass::Background);
    sup[p] = (background || valid.bits[p]) ? 1 : 0;
  }
  return sup;
}

// Mean negative log-likelihood over supervised pixels. probs rows must be
// normalized (softmax output).
template <typename Scalar>
Scalar masked_cross_entropy(const MatX<Scalar>& probs, const LabelGrid& labels,
                            const std::vector<std::uint8_t>& supervised) {
  if (probs.rows() != static_cast<Eigen::Index>(labels.classes.size()))
    throw ContractError("masked_cross_entropy: label/prob size mismatch");
  Scalar total = 0;
  int n = 0;
  for (Eigen::Index p = 0; p < probs.rows(); ++p) {
    if (!supervised[p]) continue;
    total -= std::log(probs(p, labels.classes[p]));
    ++n;
  }
  if (n == 0) throw DataError("no supervised pixels");
  return total / static_cast<Scalar>(n);
}

// Fused softmax + masked cross entropy on logits; the training path.
template <typename Scalar>
struct SegLossResult {
  Scalar loss;
  MatX<Scalar> probs;
  MatX<Scalar> dlogits;
};

template <typename Scalar>
SegLossResult<Scalar> softmax_cross_entropy_with_logits(
    const MatX<Scalar>& logits, const LabelGrid& labels,
    const std::vector<std::uint8_t>& supervised) {
  SegLossResult<Scalar> out;
  out.probs = softmax_rows(logits);
  out.loss = masked_cross_entropy(out.probs, labels, supervised);
  int n = 0;
  for (auto s : supervised) n += s;
  out.dlogits = MatX<Scalar>::Zero(logits.rows(), logits.cols());
  const Scalar inv = Scalar(1) / static_cast<Scalar>(n);
  for (Eigen::Index p = 0; p < logits.rows(); ++p) {
    if (!supervised[p]) continue;
    out.dlogits.row(p) = out.probs.row(p) * inv;
    out.dlogits(p, labels.classes[p]) -= inv;
  }
  return out;
}

template <typename Scalar>
Scalar mse_loss(const VecX<Scalar>& pred, const VecX<Scalar>& target) {
  if (pred.size() == 0) throw DataError("mse_loss: empty input");
  if (pred.size() != target.size())
    throw ContractError("mse_loss: length mismatch");
  return (pred - target).squaredNorm() / static_cast<Scalar>(pred.size());
}

template <typename Scalar>
VecX<Scalar> mse_loss_grad(const VecX<Scalar>& pred,
                           const VecX<Scalar>& target) {
  return Scalar(2) * (pred - target) / static_cast<Scalar>(pred.size());
}

// Predictions for temporally adjacent dates, sorted by date. Entries from
// the same calendar day share a day_group id.
template <typename Scalar>
struct RegressionBatch {
  VecX<Scalar> predictions;
  VecX<Scalar> targets;
  std::vector<int> day_group;
};

// Line through the batch, m = (y_l - y_f) / b and c = y_f. The divisor is
// the batch size b, not b - 1.
template <typename Scalar>
struct LineFit {
  Scalar slope;
  Scalar intercept;

  static LineFit fit(const VecX<Scalar>& y) {
    const auto b = y.size();
    return {(y(b - 1) - y(0)) / static_cast<Scalar>(b), y(0)};
  }
};

// Mean point-to-line distance d_i = |m*i + c - y_i| / sqrt(m^2 + 1),
// i = 0..b-1 with y_f at i = 0.
template <typename Scalar>
Scalar line_loss(const VecX<Scalar>& pred) {
  const auto b = pred.size();
  if (b < 2) throw DataError("line_loss: need at least two predictions");
  const auto fit = LineFit<Scalar>::fit(pred);
  const Scalar denom = std::sqrt(fit.slope * fit.slope + Scalar(1));
  Scalar total = 0;
  for (Eigen::Index i = 0; i < b; ++i)
    total += std::abs(fit.slope * static_cast<Scalar>(i) + fit.intercept - pred(i)) / denom;
  return total / static_cast<Scalar>(b);
}

template <typename Scalar>
VecX<Scalar> line_loss_grad(const VecX<Scalar>& pred) {
  const auto b = pred.size();
  if (b < 2) throw DataError("line_loss: need at least two predictions");
  const auto fit = LineFit<Scalar>::fit(pred);
  const Scalar m = fit.slope;
  const Scalar s = std::sqrt(m * m + Scalar(1));
  const Scalar bs = static_cast<Scalar>(b);

  VecX<Scalar> grad = VecX<Scalar>::Zero(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Scalar u = m * static_cast<Scalar>(i) + fit.intercept - pred(i);
    const Scalar sgn = u > 0 ? Scalar(1) : (u < 0 ? Scalar(-1) : Scalar(0));
    // d d_i / d y_j = sgn(u_i)/s * du_i/dy_j - |u_i| * m/s^3 * dm/dy_j
    const Scalar d_di_dm =
        sgn / s * static_cast<Scalar>(i) - std::abs(u) * m / (s * s * s);
    grad(0) += d_di_dm * (Scalar(-1) / bs) + sgn / s;  // dc/dy_0 = 1
    grad(b - 1) += d_di_dm * (Scalar(1) / bs);
    grad(i) += -sgn / s;
  }
  return grad / bs;
}

// Population variance of same-day predictions, averaged over days that
// have at least two predictions; zero when no day has duplicates.
template <typename Scalar>
Scalar intra_day_coherence_loss(const VecX<Scalar>& pred,
                                const std::vector<int>& day_group) {
  if (static_cast<Eigen::Index>(day_group.size()) != pred.size())
    throw ContractError("intra_day_coherence_loss: grouping size mismatch");
  int max_group = -1;
  for (int g : day_group) max_group = g > max_group ? g : max_group;
  Scalar total = 0;
  int days_with_dups = 0;
  for (int g = 0; g <= max_group; ++g) {
    Scalar sum = 0, sum2 = 0;
    int n = 0;
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
      if (day_group[i] != g) continue;
      sum += pred(i);
      sum2 += pred(i) * pred(i);
      ++n;
    }
    if (n < 2) continue;
    const Scalar mean = sum / static_cast<Scalar>(n);
    total += sum2 / static_cast<Scalar>(n) - mean * mean;
    ++days_with_dups;
  }
  return days_with_dups == 0 ? Scalar(0) : total / static_cast<Scalar>(days_with_dups);
}

template <typename Scalar>
VecX<Scalar> intra_day_coherence_loss_grad(const VecX<Scalar>& pred,
                                           const std::vector<int>& day_group) {
  VecX<Scalar> grad = VecX<Scalar>::Zero(pred.size());
  int max_group = -1;
  for (int g : day_group) max_group = g > max_group ? g : max_group;
  int days_with_dups = 0;
  for (int g = 0; g <= max_group; ++g) {
    int n = 0;
    for (int gg : day_group) n += gg == g ? 1 : 0;
    if (n >= 2) ++days_with_dups;
  }
  if (days_with_dups == 0) return grad;
  for (int g = 0; g <= max_group; ++g) {
    Scalar sum = 0;
    int n = 0;
    for (Eigen::Index i = 0; i < pred.size(); ++i)
      if (day_group[i] == g) {
        sum += pred(i);
        ++n;
      }
    if (n < 2) continue;
    const Scalar mean = sum / static_cast<Scalar>(n);
    for (Eigen::Index i = 0; i < pred.size(); ++i)
      if (day_group[i] == g)
        grad(i) += Scalar(2) * (pred(i) - mean) /
                   (static_cast<Scalar>(n) * static_cast<Scalar>(days_with_dups));
  }
  return grad;
}

template <typename Scalar>
Scalar regression_loss(const RegressionBatch<Scalar>& batch,
                       const LossWeights& w) {
  return mse_loss(batch.predictions, batch.targets) +
         static_cast<Scalar>(w.beta) * line_loss(batch.predictions) +
         static_cast<Scalar>(w.gamma) *
             intra_day_coherence_loss(batch.predictions, batch.day_group);
}

template <typename Scalar>
VecX<Scalar> regression_loss_grad(const RegressionBatch<Scalar>& batch,
                                  const LossWeights& w) {
  return mse_loss_grad(batch.predictions, batch.targets) +
         static_cast<Scalar>(w.beta) * line_loss_grad(batch.predictions) +
         static_cast<Scalar>(w.gamma) *
             intra_day_coherence_loss_grad(batch.predictions, batch.day_group);
}

}  // namespace lakeice
