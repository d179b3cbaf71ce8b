#include "lakeice/train/split.hpp"

#include <algorithm>

namespace lakeice {

ExperimentSplit make_split(const Dataset& ds, SplitMode mode,
                           const std::string& holdout) {
  const auto keys = mode == SplitMode::LOWO ? ds.winter_ids() : ds.lake_ids();
  if (std::find(keys.begin(), keys.end(), holdout) == keys.end())
    throw DataError("unknown split key '" + holdout + "'");

  ExperimentSplit split;
  split.mode = mode;
  split.holdout = holdout;
  for (const auto& lw : ds.items) {
    const std::string& key = mode == SplitMode::LOWO ? lw.winter_id : lw.lake_id;
    (key == holdout ? split.test : split.train).push_back(&lw);
  }
  if (split.train.empty()) throw DataError("split leaves no training data");
  return split;
}

ExperimentSplit parse_split(const Dataset& ds, const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ConfigError("split spec must be lowo:<winter> or lolo:<lake>");
  const std::string mode = spec.substr(0, colon);
  const std::string key = spec.substr(colon + 1);
  if (mode == "lowo") return make_split(ds, SplitMode::LOWO, key);
  if (mode == "lolo") return make_split(ds, SplitMode::LOLO, key);
  throw ConfigError("unknown split mode '" + mode + "'");
}

}  // namespace lakeice
