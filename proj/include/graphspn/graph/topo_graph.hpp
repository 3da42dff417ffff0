#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/category.hpp"

namespace graphspn::graph {

using NodeId = std::int64_t;
using Evidence = std::array<double, kNumCategories>;

struct TopoNode {
  NodeId id = 0;
  std::optional<PlaceCategory> groundtruth;
  bool is_placeholder = false;
  std::optional<Evidence> evidence;
  // Set by apply_noise on the nodes whose evidence was made to favour a
  // wrong class.
  bool evidence_incorrect = false;

  bool operator==(const TopoNode&) const = default;
};

struct TopoGraph {
  std::string id;
  std::string building;
  std::vector<TopoNode> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;

  bool operator==(const TopoGraph&) const = default;

  std::size_t size() const { return nodes.size(); }
};

// Positional adjacency: neighbours of nodes[i] as indices into nodes, sorted.
using Adjacency = std::vector<std::vector<std::size_t>>;

// Throws DataError naming the offending node or edge when the graph is not a
// simple connected undirected graph with unique node ids, or when a node's
// evidence breaks its invariants.
void check_invariants(const TopoGraph& graph);

// Index of the node with the given id; throws DataError if absent.
std::size_t index_of(const TopoGraph& graph, NodeId id);

Adjacency adjacency(const TopoGraph& graph);

nlohmann::json to_json(const TopoGraph& graph);
TopoGraph graph_from_json(const nlohmann::json& doc);

void save_graph(const TopoGraph& graph, const std::filesystem::path& path);
TopoGraph load_graph(const std::filesystem::path& path);

// Exchanges the groundtruth labels a and b; everything else is unchanged.
TopoGraph swap_labels(const TopoGraph& graph, PlaceCategory a, PlaceCategory b);

}  // namespace graphspn::graph
