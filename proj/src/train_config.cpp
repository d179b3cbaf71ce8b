#include "lakeice/train/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lakeice/core/error.hpp"
#include "lakeice/core/hash.hpp"

namespace lakeice {

using nlohmann::json;

std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::Adam ? "adam" : "sgd";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::Adam;
  if (s == "sgd") return OptimizerKind::Sgd;
  throw ConfigError("unknown optimizer '" + s + "'");
}

int TrainConfig::scaled_epochs(const StageConfig& stage) const {
  const int n = static_cast<int>(std::llround(stage.epochs * epoch_scale));
  return n < 1 ? 1 : n;
}

void TrainConfig::validate() const {
  if (epoch_scale <= 0.0 || epoch_scale > 1.0)
    throw ConfigError("epoch_scale must lie in (0,1]");
  if (loss_weights.beta < 0 || loss_weights.gamma < 0)
    throw ConfigError("loss weights must be non-negative");
  for (const StageConfig* s :
       {&sar_pretrain, &optical_pretrain, &shared_finetune, &regression}) {
    if (s->epochs < 1) throw ConfigError("stage epochs must be positive");
    if (s->batch_size < 1) throw ConfigError("batch size must be positive");
    if (s->lr <= 0) throw ConfigError("learning rate must be positive");
  }
  if (window_size < 1 || window_size % 2 == 0)
    throw ConfigError("window size must be odd and positive");
}

namespace {

json stage_to_json(const StageConfig& s) {
  json j{{"epochs", s.epochs},
         {"batch_size", s.batch_size},
         {"optimizer", to_string(s.optimizer)},
         {"lr", s.lr}};
  if (s.decay_steps > 0)
    j["lr_decay"] = {{"steps", s.decay_steps}, {"rate", s.decay_rate}};
  else
    j["lr_decay"] = nullptr;
  return j;
}

StageConfig stage_from_json(const json& j) {
  StageConfig s;
  s.epochs = j.at("epochs").get<int>();
  s.batch_size = j.at("batch_size").get<int>();
  s.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  s.lr = j.at("lr").get<double>();
  if (j.contains("lr_decay") && !j.at("lr_decay").is_null()) {
    s.decay_steps = j.at("lr_decay").at("steps").get<int>();
    s.decay_rate = j.at("lr_decay").at("rate").get<double>();
  }
  return s;
}

}  // namespace

std::string TrainConfig::to_json() const {
  json j{{"seed", seed},
         {"epoch_scale", epoch_scale},
         {"loss_weights", {{"beta", loss_weights.beta}, {"gamma", loss_weights.gamma}}},
         {"stages",
          {{"sar_pretrain", stage_to_json(sar_pretrain)},
           {"optical_pretrain", stage_to_json(optical_pretrain)},
           {"shared_finetune", stage_to_json(shared_finetune)},
           {"regression", stage_to_json(regression)}}},
         {"window_size", window_size}};
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
  TrainConfig c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.epoch_scale = j.at("epoch_scale").get<double>();
    c.loss_weights.beta = j.at("loss_weights").at("beta").get<double>();
    c.loss_weights.gamma = j.at("loss_weights").at("gamma").get<double>();
    const json& s = j.at("stages");
    c.sar_pretrain = stage_from_json(s.at("sar_pretrain"));
    c.optical_pretrain = stage_from_json(s.at("optical_pretrain"));
    c.shared_finetune = stage_from_json(s.at("shared_finetune"));
    c.regression = stage_from_json(s.at("regression"));
    c.window_size = j.at("window_size").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read config " + file.string());
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void TrainConfig::save(const std::filesystem::path& file) const {
  std::ofstream os(file);
  if (!os) throw ConfigError("cannot write config " + file.string());
  os << to_json() << "\n";
}

std::string TrainConfig::hash() const { return fnv1a_hex(to_json()); }

}  // namespace lakeice
