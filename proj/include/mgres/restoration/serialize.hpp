#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mgres/restoration/stage.hpp"

namespace mgres::restoration {

nlohmann::json stage_to_json(const RestorationStage& stage);
RestorationStage stage_from_json(const nlohmann::json& j);

/// Flat rows, one per element per stage. Header included.
std::string stages_to_csv(const std::vector<RestorationStage>& stages);
std::vector<RestorationStage> stages_from_csv(const std::string& csv);

}  // namespace mgres::restoration
