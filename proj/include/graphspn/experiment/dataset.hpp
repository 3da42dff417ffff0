#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphspn/experiment/config.hpp"
#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::experiment {

// Floor ids are "<building>_fNN", numbered from 0 within each building.
std::string floor_id(const std::string& building, int index);

// Clean floors (groundtruth only) for every building, building by building.
std::vector<graph::TopoGraph> generate_floors(const DatasetConfig& config);

// Marks llround(fraction * N) nodes, at least one when fraction > 0, as
// placeholders and strips their evidence. Groundtruth is kept for scoring.
graph::TopoGraph demote_placeholders(const graph::TopoGraph& graph, double fraction, std::uint64_t seed);

// Test graph for (floor, evidence set, level): placeholders are demoted
// first, with a choice that depends only on (floor, evidence set), then the
// remaining nodes receive noisy evidence. The id becomes "<floor>_e<k>".
graph::TopoGraph make_test_graph(const graph::TopoGraph& clean, const DatasetConfig& config, int evidence_set,
                                 const graph::NoiseLevel& level);

const graph::NoiseLevel& noise_level(const DatasetConfig& config, int level);

// Writes dataset.json, clean/<id>.json, noisy/L<level>/<id>_e<k>.json for the
// selected levels, and noise_stats.csv. Throws DataError when the directory
// cannot be written.
void write_dataset(const ExperimentConfig& config, const std::filesystem::path& dir);

// Reads clean floors of the given buildings (all when empty), checking that
// the dataset was generated from the same dataset configuration.
std::vector<graph::TopoGraph> load_clean_floors(const ExperimentConfig& config, const std::filesystem::path& dir,
                                                const std::vector<std::string>& buildings = {});

graph::TopoGraph load_test_graph(const std::filesystem::path& dir, const std::string& floor, int evidence_set,
                                 int level);

// Fingerprint of the dataset section and master seed, stored in dataset.json.
std::string dataset_fingerprint(const ExperimentConfig& config);

}  // namespace graphspn::experiment
