#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "graphspn/common/rng.hpp"
#include "graphspn/graph/topo_graph.hpp"
#include "graphspn/templates/templates.hpp"

namespace graphspn::templates {

// The nodes of a graph that are still available for matching.
class GraphView {
 public:
  explicit GraphView(const graph::TopoGraph& graph);

  const graph::TopoGraph& graph() const { return *graph_; }
  const graph::Adjacency& adjacency() const { return adjacency_; }
  bool alive(std::size_t index) const { return alive_[index]; }
  std::size_t alive_count() const { return alive_count_; }
  std::size_t index(graph::NodeId id) const;

  void remove(std::size_t index);
  void remove(const Component& component);

 private:
  const graph::TopoGraph* graph_;
  graph::Adjacency adjacency_;
  std::unordered_map<graph::NodeId, std::size_t> index_;
  std::vector<bool> alive_;
  std::size_t alive_count_;
};

// Embeds the template into the alive nodes (template edges must be graph
// edges; extra graph edges are allowed). Start nodes are tried in random
// order, one backtracking restart per alive node, with neighbours explored in
// random order, so the result is a random embedding and nullopt means none
// exists.
std::optional<Component> find_random_isomorphic_subgraph(const GraphView& view, const SubGraphTemplate& t,
                                                         Rng& rng);

}  // namespace graphspn::templates
