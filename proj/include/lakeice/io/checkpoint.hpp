#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lakeice/core/grid.hpp"
#include "lakeice/nn/fusion_model.hpp"
#include "lakeice/nn/regression_net.hpp"

namespace lakeice {

// One archive of named, shape-tagged float32 weight arrays plus a text
// (JSON) header recording the architecture and the stage that produced it.
struct CheckpointHeader {
  std::string stage;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  EncoderConfig encoder;
  RegressionConfig regression;
  bool has_regression = false;
};

struct Checkpoint {
  CheckpointHeader header;
  std::vector<std::pair<std::string, MatX<float>>> tensors;

  const MatX<float>* find(const std::string& name) const {
    for (const auto& [n, t] : tensors)
      if (n == name) return &t;
    return nullptr;
  }
  void put(const std::string& name, MatX<float> t) {
    tensors.emplace_back(name, std::move(t));
  }
};

void write_checkpoint(const std::filesystem::path& file, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::filesystem::path& file);

// ---- model <-> checkpoint ----

template <typename Scalar>
void store_fusion_model(Checkpoint& ck, FusionModel<Scalar>& model) {
  for (auto& p : model.params())
    ck.put(p.name, p.value->template cast<float>());
  ck.put("modis_stats.mean", model.modis_stats.mean.template cast<float>());
  ck.put("modis_stats.std", model.modis_stats.std.template cast<float>());
  ck.put("viirs_stats.mean", model.viirs_stats.mean.template cast<float>());
  ck.put("viirs_stats.std", model.viirs_stats.std.template cast<float>());
  ck.header.encoder = model.cfg;
}

template <typename Scalar>
void load_fusion_model(const Checkpoint& ck, FusionModel<Scalar>& model) {
  for (auto& p : model.params()) {
    const MatX<float>* t = ck.find(p.name);
    if (!t) throw DataError("checkpoint missing tensor " + p.name);
    if (t->rows() != p.value->rows() || t->cols() != p.value->cols())
      throw DataError("checkpoint shape mismatch for " + p.name);
    *p.value = t->template cast<Scalar>();
  }
  auto load_stat = [&](const std::string& name, MatX<Scalar>& dst) {
    const MatX<float>* t = ck.find(name);
    if (!t) throw DataError("checkpoint missing tensor " + name);
    dst = t->template cast<Scalar>();
  };
  load_stat("modis_stats.mean", model.modis_stats.mean);
  load_stat("modis_stats.std", model.modis_stats.std);
  load_stat("viirs_stats.mean", model.viirs_stats.mean);
  load_stat("viirs_stats.std", model.viirs_stats.std);
}

template <typename Scalar>
void store_regression_net(Checkpoint& ck, RegressionNet<Scalar>& net) {
  ParamList<Scalar> params;
  net.collect_params("regression", params);
  for (auto& p : params) ck.put(p.name, p.value->template cast<float>());
  ck.header.regression = net.cfg;
  ck.header.has_regression = true;
}

template <typename Scalar>
void load_regression_net(const Checkpoint& ck, RegressionNet<Scalar>& net) {
  ParamList<Scalar> params;
  net.collect_params("regression", params);
  for (auto& p : params) {
    const MatX<float>* t = ck.find(p.name);
    if (!t) throw DataError("checkpoint missing tensor " + p.name);
    if (t->rows() != p.value->rows() || t->cols() != p.value->cols())
      throw DataError("checkpoint shape mismatch for " + p.name);
    *p.value = t->template cast<Scalar>();
  }
}

}  // namespace lakeice
