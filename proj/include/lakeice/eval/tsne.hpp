#pragma once

#include <cstdint>

#include "lakeice/core/grid.hpp"

namespace lakeice {

// Exact (O(N^2)) t-distributed stochastic neighbour embedding, adequate
// for the few hundred acquisitions of a lake-winter.
struct TsneOptions {
  int output_dims = 2;
  double perplexity = 30.0;
  int iterations = 1000;
  std::uint64_t seed = 1;
};

// rows = samples, cols = feature dims; returns rows x output_dims.
MatX<double> tsne(const MatX<double>& features, const TsneOptions& opts);

}  // namespace lakeice
