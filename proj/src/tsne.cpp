#include "lakeice/eval/tsne.hpp"

#include <cmath>
#include <random>

#include "lakeice/core/error.hpp"

namespace lakeice {
namespace {

// Conditional distribution row with the sigma matching the requested
// perplexity, found by bisection on the precision.
void perplexity_row(const MatX<double>& d2, int i, double perplexity,
                    MatX<double>& p) {
  const auto n = d2.rows();
  double beta = 1.0, beta_min = 0.0, beta_max = 1e12;
  const double log_perp = std::log(perplexity);
  for (int iter = 0; iter < 64; ++iter) {
    double sum = 0, dot = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double pij = std::exp(-beta * d2(i, j));
      sum += pij;
      dot += pij * d2(i, j);
    }
    if (sum <= 0) sum = 1e-300;
    const double entropy = std::log(sum) + beta * dot / sum;
    const double diff = entropy - log_perp;
    if (std::abs(diff) < 1e-5) break;
    if (diff > 0) {
      beta_min = beta;
      beta = beta_max > 1e11 ? beta * 2 : (beta + beta_max) / 2;
    } else {
      beta_max = beta;
      beta = (beta + beta_min) / 2;
    }
  }
  double sum = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) {
      p(i, j) = 0;
      continue;
    }
    p(i, j) = std::exp(-beta * d2(i, j));
    sum += p(i, j);
  }
  if (sum <= 0) sum = 1e-300;
  p.row(i) /= sum;
}

}  // namespace

MatX<double> tsne(const MatX<double>& features, const TsneOptions& opts) {
  const auto n = features.rows();
  if (n < 4) throw DataError("tsne: need at least 4 samples");
  if (opts.output_dims != 2 && opts.output_dims != 3)
    throw ConfigError("tsne: output dimension must be 2 or 3");

  const double perplexity =
      std::min(opts.perplexity, std::max(2.0, (n - 1) / 3.0));

  // pairwise squared distances
  const VecX<double> sq = features.rowwise().squaredNorm();
  MatX<double> d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                    2.0 * features * features.transpose();
  d2 = d2.cwiseMax(0.0);

  MatX<double> p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) perplexity_row(d2, static_cast<int>(i), perplexity, p);
  MatX<double> pj = (p + p.transpose()) / (2.0 * n);
  pj = pj.cwiseMax(1e-12);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1e-4);
  MatX<double> y(n, opts.output_dims);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int d = 0; d < opts.output_dims; ++d) y(i, d) = gauss(rng);

  MatX<double> dy = MatX<double>::Zero(n, opts.output_dims);
  MatX<double> gains = MatX<double>::Ones(n, opts.output_dims);
  const double lr = 200.0;
  const int exaggeration_end = std::min(250, opts.iterations / 4);

  for (int iter = 0; iter < opts.iterations; ++iter) {
    const double exaggeration = iter < exaggeration_end ? 12.0 : 1.0;
    const double momentum = iter < exaggeration_end ? 0.5 : 0.8;

    // Student-t affinities in the embedding
    const VecX<double> ysq = y.rowwise().squaredNorm();
    MatX<double> num = ysq.replicate(1, n) + ysq.transpose().replicate(n, 1) -
                       2.0 * y * y.transpose();
    num = (num.cwiseMax(0.0).array() + 1.0).inverse().matrix();
    num.diagonal().setZero();
    const double qsum = std::max(num.sum(), 1e-300);

    MatX<double> grad = MatX<double>::Zero(n, opts.output_dims);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = num(i, j) / qsum;
        const double mult = (exaggeration * pj(i, j) - q) * num(i, j);
        grad.row(i) += 4.0 * mult * (y.row(i) - y.row(j));
      }
    }

    for (Eigen::Index i = 0; i < n; ++i)
      for (int d = 0; d < opts.output_dims; ++d) {
        const bool same_sign = (grad(i, d) > 0) == (dy(i, d) > 0);
        gains(i, d) = std::max(0.01, same_sign ? gains(i, d) * 0.8
                                               : gains(i, d) + 0.2);
      }
    dy = momentum * dy - lr * gains.cwiseProduct(grad);
    y += dy;
    y.rowwise() -= y.colwise().mean();
  }
  return y;
}

}  // namespace lakeice
