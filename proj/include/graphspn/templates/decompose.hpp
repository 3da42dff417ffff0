#pragma once

#include <cstdint>
#include <vector>

#include "graphspn/common/rng.hpp"
#include "graphspn/graph/topo_graph.hpp"
#include "graphspn/templates/templates.hpp"

namespace graphspn::templates {

// Greedy partition: templates in decreasing rank, each matched and removed
// until no embedding remains. Throws ConfigError if nodes are left over (only
// possible without a single-node template).
Decomposition decompose(const graph::TopoGraph& graph, const std::vector<SubGraphTemplate>& templates, Rng& rng);

// count decompositions, the d-th driven by derive_seed(seed, d).
std::vector<Decomposition> multi_decompose(const graph::TopoGraph& graph,
                                           const std::vector<SubGraphTemplate>& templates, int count,
                                           std::uint64_t seed);

// Decomposition of the graph after new nodes were appended: components of
// `previous` that lie entirely within `graph` are kept, and only the nodes
// they do not cover are decomposed.
Decomposition extend_decomposition(const graph::TopoGraph& graph, const Decomposition& previous,
                                   const std::vector<SubGraphTemplate>& templates, Rng& rng);

}  // namespace graphspn::templates
