#pragma once

#include <string>
#include <vector>

#include "lakeice/core/grid.hpp"

namespace lakeice {

// Named view into a module's weight matrices. Modules append their weights
// in a fixed order; optimizers and checkpoints address them by position
// and by name respectively.
template <typename Scalar>
struct ParamRef {
  std::string name;
  MatX<Scalar>* value;
};

template <typename Scalar>
using ParamList = std::vector<ParamRef<Scalar>>;

// Gradient storage parallel to a ParamList.
template <typename Scalar>
struct GradBuffer {
  std::vector<MatX<Scalar>> grads;

  explicit GradBuffer(const ParamList<Scalar>& params) {
    grads.reserve(params.size());
    for (const auto& p : params)
      grads.emplace_back(MatX<Scalar>::Zero(p.value->rows(), p.value->cols()));
  }

  void set_zero() {
    for (auto& g : grads) g.setZero();
  }

  void add(const GradBuffer& other) {
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += other.grads[i];
  }

  void scale(Scalar s) {
    for (auto& g : grads) g *= s;
  }
};

}  // namespace lakeice
