#pragma once

#include <string>
#include <vector>

#include "lakeice/data/dataset.hpp"

namespace lakeice {

enum class SplitMode { LOWO, LOLO };

// Leave-one-winter-out / leave-one-lake-out partition. Held-out key is a
// winter id (LOWO) or a lake id (LOLO); partitions are disjoint.
struct ExperimentSplit {
  SplitMode mode = SplitMode::LOWO;
  std::string holdout;
  std::vector<const LakeWinter*> train;
  std::vector<const LakeWinter*> test;
};

ExperimentSplit make_split(const Dataset& ds, SplitMode mode,
                           const std::string& holdout);

// Parses "lowo:<winter>" / "lolo:<lake>" CLI split specs.
ExperimentSplit parse_split(const Dataset& ds, const std::string& spec);

}  // namespace lakeice
