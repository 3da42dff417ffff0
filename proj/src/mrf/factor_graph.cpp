#include "graphspn/mrf/factor_graph.hpp"

#include <cmath>
#include <set>

#include "graphspn/common/errors.hpp"

namespace graphspn::mrf {

void check(const FactorGraph& fg) {
  if (!fg.node_ids.empty() && fg.node_ids.size() != fg.cardinalities.size()) {
    throw DataError("factor graph node id list differs from the variable count");
  }
  for (std::size_t f = 0; f < fg.factors.size(); ++f) {
    const auto& factor = fg.factors[f];
    const auto where = " (factor " + std::to_string(f) + ")";
    const std::size_t arity = factor.kind == FactorKind::kUnary ? 1 : factor.kind == FactorKind::kPairwise ? 2 : 3;
    if (factor.vars.size() != arity) throw DataError("factor arity does not match its kind" + where);
    std::set<std::size_t> distinct(factor.vars.begin(), factor.vars.end());
    if (distinct.size() != factor.vars.size()) throw DataError("factor repeats a variable" + where);
    std::size_t cells = 1;
    for (auto v : factor.vars) {
      if (v >= fg.num_variables()) throw DataError("factor references unknown variable" + where);
      cells *= fg.cardinalities[v];
    }
    if (factor.table.size() != cells) throw DataError("factor table has the wrong size" + where);
    for (double x : factor.table) {
      if (!std::isfinite(x) || x < 0.0) throw DataError("factor entries must be finite and >= 0" + where);
    }
  }
}

FactorGraph build_mrf(const graph::TopoGraph& graph, const PotentialTable& table) {
  FactorGraph fg;
  const std::uint32_t L = table.cardinality;
  for (const auto& n : graph.nodes) {
    fg.cardinalities.push_back(L);
    fg.node_ids.push_back(n.id);
  }
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    Factor u{FactorKind::kUnary, {i}, std::vector<double>(L, 1.0)};
    if (!n.is_placeholder && n.evidence) u.table.assign(n.evidence->begin(), n.evidence->end());
    fg.factors.push_back(std::move(u));
  }
  if (table.order == 2) {
    for (const auto& [a, b] : graph.edges) {
      fg.factors.push_back({FactorKind::kPairwise, {graph::index_of(graph, a), graph::index_of(graph, b)}, table.values});
    }
  } else {
    for (const auto& t : connected_triples(graph)) {
      fg.factors.push_back({FactorKind::kTriple, {t[0], t[1], t[2]}, table.values});
    }
  }
  check(fg);
  return fg;
}

double normalized_log_score(const FactorGraph& fg, const std::vector<std::uint32_t>& assignment) {
  if (assignment.size() != fg.num_variables()) throw DataError("assignment size differs from the variable count");
  if (assignment.empty()) throw DataError("cannot score an empty assignment");
  double total = 0.0;
  for (const auto& f : fg.factors) {
    std::size_t idx = 0;
    for (auto v : f.vars) idx = idx * fg.cardinalities[v] + assignment[v];
    total += std::log(f.table[idx]);
  }
  return total / static_cast<double>(assignment.size());
}

}  // namespace graphspn::mrf
