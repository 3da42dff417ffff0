#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::mrf {

// Co-occurrence table shared by every dependency factor of one MRF order.
// Row-major over `order` label indices, normalized to sum 1.
struct PotentialTable {
  int order = 2;
  std::uint32_t cardinality = graph::kNumCategories;
  std::vector<double> values;

  double at(std::span<const std::uint32_t> labels) const;
};

// Node-position triples {a, b, c} (a < b < c) whose induced subgraph is
// connected, i.e. every 3-node path or triangle, each listed once.
std::vector<std::array<std::size_t, 3>> connected_triples(const graph::TopoGraph& graph);

// Order 2 counts each edge in both orders; order 3 counts every connected
// triple in all 6 orders. Smoothing is added to every cell before
// normalizing. Throws ConfigError for another order or negative smoothing,
// DataError when a node lacks groundtruth.
PotentialTable estimate_potentials(std::span<const graph::TopoGraph> graphs, int order, double smoothing);

nlohmann::json to_json(const PotentialTable& table);
PotentialTable potential_table_from_json(const nlohmann::json& doc);

}  // namespace graphspn::mrf
