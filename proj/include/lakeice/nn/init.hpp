#pragma once

#include <cmath>
#include <random>

#include "lakeice/core/grid.hpp"

namespace lakeice {

// Glorot uniform: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
template <typename Scalar>
void glorot_uniform(MatX<Scalar>& w, int fan_in, int fan_out,
                    std::mt19937& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      w(i, j) = static_cast<Scalar>(dist(rng));
}

}  // namespace lakeice
