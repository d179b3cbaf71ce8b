#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lakeice/nn/params.hpp"

namespace lakeice {

// Stepwise (staircase) exponential schedule applied on optimizer steps:
// lr(step) = lr0 * rate^floor(step / steps). "steps <= 0" disables decay.
struct LrSchedule {
  double lr0 = 1e-3;
  int decay_steps = 0;
  double decay_rate = 1.0;

  double at(std::int64_t step) const {
    if (decay_steps <= 0) return lr0;
    return lr0 * std::pow(decay_rate, static_cast<double>(step / decay_steps));
  }
};

template <typename Scalar>
struct Sgd {
  std::int64_t step_count = 0;

  void step(ParamList<Scalar>& params, const GradBuffer<Scalar>& grads,
            const LrSchedule& schedule) {
    const Scalar lr = static_cast<Scalar>(schedule.at(step_count));
    for (std::size_t i = 0; i < params.size(); ++i)
      *params[i].value -= lr * grads.grads[i];
    ++step_count;
  }
};

template <typename Scalar>
struct Adam {
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar eps = Scalar(1e-8);
  std::int64_t step_count = 0;
  std::vector<MatX<Scalar>> m, v;

  explicit Adam(const ParamList<Scalar>& params) {
    for (const auto& p : params) {
      m.emplace_back(MatX<Scalar>::Zero(p.value->rows(), p.value->cols()));
      v.emplace_back(MatX<Scalar>::Zero(p.value->rows(), p.value->cols()));
    }
  }

  void step(ParamList<Scalar>& params, const GradBuffer<Scalar>& grads,
            const LrSchedule& schedule) {
    const Scalar lr = static_cast<Scalar>(schedule.at(step_count));
    ++step_count;
    const Scalar b1t = std::pow(beta1, static_cast<Scalar>(step_count));
    const Scalar b2t = std::pow(beta2, static_cast<Scalar>(step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& g = grads.grads[i];
      m[i] = beta1 * m[i] + (Scalar(1) - beta1) * g;
      v[i] = beta2 * v[i] + (Scalar(1) - beta2) * g.cwiseProduct(g);
      const MatX<Scalar> mhat = m[i] / (Scalar(1) - b1t);
      const MatX<Scalar> vhat = v[i] / (Scalar(1) - b2t);
      params[i].value->array() -=
          lr * mhat.array() / (vhat.array().sqrt() + eps);
    }
  }
};

}  // namespace lakeice
