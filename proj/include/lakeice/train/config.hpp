#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lakeice/nn/losses.hpp"
#include "lakeice/nn/optim.hpp"

namespace lakeice {

enum class OptimizerKind { Adam, Sgd };

struct StageConfig {
  int epochs = 0;
  int batch_size = 0;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double lr = 0;
  int decay_steps = 0;     // 0 = no decay
  double decay_rate = 1.0;

  LrSchedule schedule() const { return {lr, decay_steps, decay_rate}; }
  bool operator==(const StageConfig&) const = default;
};

// All published training hyper-parameters. Defaults reproduce the paper's
// settings table; epoch_scale uniformly shrinks every stage for desk runs.
struct TrainConfig {
  std::uint64_t seed = 42;
  double epoch_scale = 1.0;
  LossWeights loss_weights;  // beta = 0.25, gamma = 0.08

  StageConfig sar_pretrain{500, 16, OptimizerKind::Adam, 5e-5, 375, 0.9};
  StageConfig optical_pretrain{40, 8, OptimizerKind::Adam, 5e-4, 0, 1.0};
  StageConfig shared_finetune{250, 16, OptimizerKind::Adam, 1e-5, 150, 0.9};
  StageConfig regression{100, 4, OptimizerKind::Sgd, 5e-4, 0, 1.0};
  int window_size = 7;

  int scaled_epochs(const StageConfig& stage) const;
  void validate() const;

  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
  static TrainConfig load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  // Fingerprint tying checkpoints, reports and run manifests together.
  std::string hash() const;
};

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

}  // namespace lakeice
