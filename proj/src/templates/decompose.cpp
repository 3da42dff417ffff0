#include "graphspn/templates/decompose.hpp"

#include <set>

#include "graphspn/common/errors.hpp"
#include "graphspn/templates/matcher.hpp"

namespace graphspn::templates {

namespace {

void cover_remaining(GraphView& view, const std::vector<SubGraphTemplate>& templates, Rng& rng, Decomposition& out) {
  for (const auto& t : by_decreasing_rank(templates)) {
    while (auto component = find_random_isomorphic_subgraph(view, t, rng)) {
      view.remove(*component);
      out.components.push_back(std::move(*component));
    }
  }
  if (view.alive_count() != 0) {
    throw ConfigError("graph '" + view.graph().id + "': template set leaves " + std::to_string(view.alive_count()) +
                      " node(s) uncovered");
  }
}

}  // namespace

Decomposition decompose(const graph::TopoGraph& graph, const std::vector<SubGraphTemplate>& templates, Rng& rng) {
  GraphView view(graph);
  Decomposition out;
  cover_remaining(view, templates, rng, out);
  return out;
}

std::vector<Decomposition> multi_decompose(const graph::TopoGraph& graph,
                                           const std::vector<SubGraphTemplate>& templates, int count,
                                           std::uint64_t seed) {
  if (count < 1) throw ConfigError("decomposition count must be >= 1");
  std::vector<Decomposition> out;
  for (int d = 0; d < count; ++d) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(d)));
    out.push_back(decompose(graph, templates, rng));
  }
  return out;
}

Decomposition extend_decomposition(const graph::TopoGraph& graph, const Decomposition& previous,
                                   const std::vector<SubGraphTemplate>& templates, Rng& rng) {
  GraphView view(graph);
  std::set<graph::NodeId> ids;
  for (const auto& n : graph.nodes) ids.insert(n.id);
  Decomposition out;
  for (const auto& c : previous.components) {
    bool inside = true;
    for (auto id : c.node_ids) inside = inside && ids.count(id) && view.alive(view.index(id));
    if (!inside) continue;
    view.remove(c);
    out.components.push_back(c);
  }
  cover_remaining(view, templates, rng, out);
  return out;
}

}  // namespace graphspn::templates
