#include "graphspn/mrf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "graphspn/common/errors.hpp"

namespace graphspn::mrf {

double PotentialTable::at(std::span<const std::uint32_t> labels) const {
  std::size_t idx = 0;
  for (auto l : labels) idx = idx * cardinality + l;
  return values[idx];
}

std::vector<std::array<std::size_t, 3>> connected_triples(const graph::TopoGraph& graph) {
  const auto adj = graph::adjacency(graph);
  std::set<std::array<std::size_t, 3>> seen;
  for (std::size_t c = 0; c < adj.size(); ++c) {
    const auto& nb = adj[c];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        std::array<std::size_t, 3> t{nb[i], c, nb[j]};
        std::sort(t.begin(), t.end());
        seen.insert(t);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

PotentialTable estimate_potentials(std::span<const graph::TopoGraph> graphs, int order, double smoothing) {
  if (order != 2 && order != 3) throw ConfigError("MRF order must be 2 or 3, got " + std::to_string(order));
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) throw ConfigError("potential smoothing must be >= 0");
  PotentialTable table;
  table.order = order;
  const std::size_t L = table.cardinality;
  table.values.assign(order == 2 ? L * L : L * L * L, 0.0);
  for (const auto& g : graphs) {
    std::vector<std::uint32_t> label;
    for (const auto& n : g.nodes) {
      if (!n.groundtruth) throw DataError("graph '" + g.id + "': node " + std::to_string(n.id) + " has no groundtruth");
      label.push_back(graph::index_of(*n.groundtruth));
    }
    if (order == 2) {
      for (const auto& [a, b] : g.edges) {
        const auto x = label[graph::index_of(g, a)], y = label[graph::index_of(g, b)];
        table.values[x * L + y] += 1.0;
        table.values[y * L + x] += 1.0;
      }
    } else {
      for (const auto& t : connected_triples(g)) {
        std::array<std::uint32_t, 3> l{label[t[0]], label[t[1]], label[t[2]]};
        std::sort(l.begin(), l.end());
        do {
          table.values[(l[0] * L + l[1]) * L + l[2]] += 1.0;
        } while (std::next_permutation(l.begin(), l.end()));
      }
    }
  }
  double total = 0.0;
  for (double& v : table.values) total += (v += smoothing);
  if (!(total > 0.0)) throw DataError("no co-occurrence counts and zero smoothing");
  for (double& v : table.values) v /= total;
  return table;
}

nlohmann::json to_json(const PotentialTable& table) {
  return {{"order", table.order}, {"cardinality", table.cardinality}, {"values", table.values}};
}

PotentialTable potential_table_from_json(const nlohmann::json& doc) {
  PotentialTable t;
  try {
    t.order = doc.at("order").get<int>();
    t.cardinality = doc.at("cardinality").get<std::uint32_t>();
    t.values = doc.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed potential table: ") + e.what());
  }
  if (t.order != 2 && t.order != 3) throw DataError("potential table order must be 2 or 3");
  std::size_t expected = 1;
  for (int i = 0; i < t.order; ++i) expected *= t.cardinality;
  if (t.values.size() != expected) throw DataError("potential table has the wrong number of cells");
  for (double v : t.values) {
    if (!std::isfinite(v) || v < 0.0) throw DataError("potential table cells must be finite and >= 0");
  }
  return t;
}

}  // namespace graphspn::mrf
