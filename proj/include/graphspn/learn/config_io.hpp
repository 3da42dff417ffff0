#pragma once

#include "json.hpp"

#include "graphspn/learn/hard_em.hpp"
#include "graphspn/learn/structure.hpp"

namespace graphspn::learn {

// Missing keys keep their defaults; unknown keys are rejected with ConfigError.
StructureParams structure_params_from_json(const nlohmann::json& doc);
TrainConfig train_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const StructureParams& params);
nlohmann::json to_json(const TrainConfig& config);

}  // namespace graphspn::learn
