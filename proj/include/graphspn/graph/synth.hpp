#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::graph {

struct SynthFloorParams {
  int corridor_length = 8;
  int rooms_per_corridor = 6;
  std::array<int, 2> room_size_range = {1, 4};
  // Room categories are drawn from these with the CR and DW entries ignored.
  std::array<double, kNumCategories> category_priors = {0.25, 0.20, 0.05, 0.0, 0.0, 0.05, 0.10, 0.10, 0.10, 0.15};
  std::uint64_t rng_seed = 0;
};

// Throws ConfigError on degenerate values.
void check(const SynthFloorParams& params);

SynthFloorParams synth_params_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SynthFloorParams& params);

// Office-like floor: a corridor path of CR nodes, and rooms that are
// connected clusters of a single category, each joined to one corridor node
// through a single DW node. Node ids are 0..N-1. Every node carries
// groundtruth and no evidence.
TopoGraph generate_synthetic_floor(const SynthFloorParams& params, std::string id = "floor",
                                   std::string building = "");

}  // namespace graphspn::graph
