#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/noise.hpp"
#include "graphspn/graph/synth.hpp"
#include "graphspn/model/instance.hpp"
#include "graphspn/model/model.hpp"
#include "graphspn/mrf/belief_propagation.hpp"
#include "graphspn/templates/templates.hpp"

namespace graphspn::experiment {

struct DatasetConfig {
  std::vector<std::string> buildings = {"A", "B", "C"};
  int floors_per_building = 20;
  // Each floor draws its corridor length and room count uniformly from these
  // ranges; the remaining floor parameters come from `floor`.
  std::array<int, 2> corridor_length_range = {5, 14};
  std::array<int, 2> rooms_range = {3, 12};
  // Floors outside this node count are redrawn.
  std::array<int, 2> node_count_range = {15, 60};
  graph::SynthFloorParams floor;
  int evidence_sets = 3;
  double placeholder_fraction = 0.1;
  std::vector<graph::NoiseLevel> noise_levels = graph::default_noise_levels();
};

struct GraphSpnConfig {
  std::vector<templates::SubGraphTemplate> templates = templates::default_template_set();
  model::TemplateTrainingConfig training;
  model::InstantiationConfig instantiation;
};

struct MrfConfig {
  double smoothing = 1.0;
  mrf::BpConfig bp;
};

inline const std::vector<std::string> kModelNames = {"graphspn", "mrf2", "mrf3"};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  DatasetConfig dataset;
  GraphSpnConfig graphspn;
  MrfConfig mrf;
  std::vector<std::string> models = kModelNames;
  std::vector<int> levels = {1, 2, 3, 4, 5, 6};
  // Relative to the working directory given on the command line.
  std::string data_dir = "data";
  std::string model_dir = "models";
  std::string results_dir = "results";
};

// Throws ConfigError for inconsistent values (too few buildings, unknown
// model names, levels without a noise definition, bad ranges, ...).
void check(const ExperimentConfig& config);

// Missing keys keep their defaults; unknown keys are ConfigError. String
// values for "noise_levels" and "templates" are paths to JSON files,
// resolved against `base_dir`. Seeds inside sub-sections are ignored: every
// random stream is derived from the top-level "seed" (see apply_seed).
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

// Sets the master seed and every derived sub-seed.
void apply_seed(ExperimentConfig& config, std::uint64_t seed);

// Parses "1..6", "2", "1,2,5" or "1..3,6".
std::vector<int> parse_levels(const std::string& text);
// Parses a comma-separated list of model names.
std::vector<std::string> parse_models(const std::string& text);

}  // namespace graphspn::experiment
