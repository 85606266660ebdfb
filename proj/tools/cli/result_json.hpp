#pragma once

#include <json.hpp>

#include "fbmre/effects.hpp"
#include "fbmre/hurst.hpp"
#include "fbmre/mc_harness.hpp"

namespace fbmre::cli {

// Result documents. Reals are written in shortest round-trip form, so a
// parse of the dumped text reproduces every double exactly.

nlohmann::json to_json(const HurstEstimate& est);
nlohmann::json to_json(const EffectsEstimate& est);
nlohmann::json to_json(const ConfidenceIntervals& ci);
nlohmann::json to_json(const Histogram& hist);
nlohmann::json to_json(const CellSummary& cell);

EffectsEstimate effects_from_json(const nlohmann::json& j);
HurstEstimate hurst_from_json(const nlohmann::json& j);

}  // namespace fbmre::cli
