#pragma once

#include <cstdint>
#include <vector>

#include "graphspn/graph/topo_graph.hpp"
#include "graphspn/mrf/potentials.hpp"

namespace graphspn::mrf {

enum class FactorKind { kUnary, kPairwise, kTriple };

// Table is row-major over `vars` in the listed order.
struct Factor {
  FactorKind kind = FactorKind::kUnary;
  std::vector<std::size_t> vars;
  std::vector<double> table;
};

struct FactorGraph {
  std::vector<std::uint32_t> cardinalities;  // per variable
  std::vector<graph::NodeId> node_ids;       // graph node of each variable, if built from one
  std::vector<Factor> factors;

  std::size_t num_variables() const { return cardinalities.size(); }
};

// Throws DataError on unknown or repeated variables, table size mismatch or
// negative entries.
void check(const FactorGraph& fg);

// One variable per node (same order), a unary per node from its evidence
// (all ones for placeholders and nodes without evidence), and the shared
// table on every edge (order 2) or every connected triple (order 3).
FactorGraph build_mrf(const graph::TopoGraph& graph, const PotentialTable& table);

// Sum of log factor values at a complete assignment, divided by the number
// of variables. The partition function is not included.
double normalized_log_score(const FactorGraph& fg, const std::vector<std::uint32_t>& assignment);

}  // namespace graphspn::mrf
