#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lakeice/data/dataset.hpp"
#include "lakeice/io/checkpoint.hpp"
#include "lakeice/nn/fusion_model.hpp"
#include "lakeice/nn/regression_net.hpp"
#include "lakeice/pipeline/window.hpp"
#include "lakeice/train/config.hpp"

namespace lakeice {

using ProgressFn = std::function<void(const std::string&)>;

// Step-1 + step-2 weights plus the stage bookkeeping that enforces the
// published training order.
struct Pipeline {
  TrainConfig config;
  EncoderConfig encoder_cfg;
  RegressionConfig regression_cfg;
  FusionModel<float> model;
  RegressionNet<float> regression;
  bool stage1_done = false;  // SAR encoder pre-training
  bool stage2_done = false;  // optical encoders + shared block
  bool stage3_done = false;  // shared block fine-tuning with SAR
  bool regression_done = false;
  std::vector<std::string> alternation_log;  // executed optical epochs
};

Pipeline make_pipeline(const TrainConfig& config,
                       const EncoderConfig& encoder_cfg = {});

struct StageResult {
  double initial_loss = 0;            // training loss before the first update
  std::vector<double> epoch_losses;   // mean loss per executed epoch
};

// SAR encoder + native-resolution auxiliary head, masked cross entropy on
// non-transition SAR acquisitions.
StageResult pretrain_sar_encoder(Pipeline& p,
                                 const std::vector<const LakeWinter*>& train,
                                 const ProgressFn& progress = nullptr);

// MODIS and VIIRS encoders + shared block + segmentation head, strict
// epoch alternation M,V,M,V,...; sensors without samples are skipped with
// a warning.
StageResult pretrain_optical_and_shared(
    Pipeline& p, const std::vector<const LakeWinter*>& train,
    const ProgressFn& progress = nullptr);

// Routes SAR through the parameter-free resize into the shared block and
// updates SAR encoder + shared block; optical encoders and the
// segmentation head stay frozen.
StageResult finetune_shared_with_sar(Pipeline& p,
                                     const std::vector<const LakeWinter*>& train,
                                     const ProgressFn& progress = nullptr);

// Step 2: regression head on frozen step-1 embeddings, mini-batches of
// four adjacent available dates from one lake-winter.
StageResult train_regression(Pipeline& p,
                             const std::vector<const LakeWinter*>& train,
                             const ProgressFn& progress = nullptr);

void run_step1(Pipeline& p, const std::vector<const LakeWinter*>& train,
               const ProgressFn& progress = nullptr);
void run_all_stages(Pipeline& p, const std::vector<const LakeWinter*>& train,
                    const ProgressFn& progress = nullptr);

// Embeddings for every kept observation of a lake-winter.
EmbeddingSeries compute_embeddings(const FusionModel<float>& model,
                                   const LakeWinter& lw);

Checkpoint pipeline_checkpoint(Pipeline& p, const std::string& stage_tag,
                               const std::string& version);
void load_pipeline_weights(Pipeline& p, const Checkpoint& ck);

}  // namespace lakeice
