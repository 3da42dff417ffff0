#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "graphspn/model/model.hpp"

namespace graphspn::model {

// A model directory holds manifest.json plus one serialized SPN per template
// (spn_<template id>.json). The manifest records the template set, the
// category encoding and a hash of the training configuration.
void save_model(const GraphSpnModel& model, const std::filesystem::path& dir,
                const nlohmann::json& training_config = nlohmann::json::object());

// Throws DataError for a missing or inconsistent bundle.
GraphSpnModel load_model(const std::filesystem::path& dir);

// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

}  // namespace graphspn::model
