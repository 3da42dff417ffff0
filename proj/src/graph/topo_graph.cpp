#include "graphspn/graph/topo_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "graphspn/common/errors.hpp"

namespace graphspn::graph {

using nlohmann::json;

namespace {

std::string edge_name(NodeId a, NodeId b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

std::unordered_map<NodeId, std::size_t> id_index(const TopoGraph& graph) {
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (!index.emplace(graph.nodes[i].id, i).second) {
      throw DataError("graph '" + graph.id + "': duplicate node id " + std::to_string(graph.nodes[i].id));
    }
  }
  return index;
}

}  // namespace

void check_invariants(const TopoGraph& graph) {
  const std::string where = "graph '" + graph.id + "': ";
  if (graph.nodes.empty()) throw DataError(where + "no nodes");
  const auto index = id_index(graph);

  for (const auto& node : graph.nodes) {
    const std::string who = where + "node " + std::to_string(node.id);
    if (node.is_placeholder && node.evidence) throw DataError(who + " is a placeholder but carries evidence");
    if (!node.evidence) continue;
    double total = 0.0;
    for (double a : *node.evidence) {
      if (!std::isfinite(a) || a < 0.0) throw DataError(who + " has a negative or non-finite evidence value");
      total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DataError(who + " evidence does not sum to 1");
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [a, b] : graph.edges) {
    if (a == b) throw DataError(where + "self-loop on node " + std::to_string(a));
    if (!index.count(a) || !index.count(b)) throw DataError(where + "edge " + edge_name(a, b) + " references an unknown node");
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw DataError(where + "duplicate edge " + edge_name(a, b));
    }
  }

  const Adjacency adj = adjacency(graph);
  std::vector<bool> reached(graph.nodes.size(), false);
  std::vector<std::size_t> frontier{0};
  reached[0] = true;
  while (!frontier.empty()) {
    const std::size_t i = frontier.back();
    frontier.pop_back();
    for (std::size_t j : adj[i]) {
      if (!reached[j]) {
        reached[j] = true;
        frontier.push_back(j);
      }
    }
  }
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (!reached[i]) throw DataError(where + "not connected; node " + std::to_string(graph.nodes[i].id) + " is unreachable");
  }
}

std::size_t index_of(const TopoGraph& graph, NodeId id) {
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].id == id) return i;
  }
  throw DataError("graph '" + graph.id + "': unknown node id " + std::to_string(id));
}

Adjacency adjacency(const TopoGraph& graph) {
  const auto index = id_index(graph);
  Adjacency adj(graph.nodes.size());
  for (const auto& [a, b] : graph.edges) {
    const auto ia = index.find(a);
    const auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw DataError("graph '" + graph.id + "': edge " + edge_name(a, b) + " references an unknown node");
    }
    adj[ia->second].push_back(ib->second);
    adj[ib->second].push_back(ia->second);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

json to_json(const TopoGraph& graph) {
  json nodes = json::array();
  for (const auto& node : graph.nodes) {
    json n = {{"id", node.id}, {"placeholder", node.is_placeholder}};
    n["category"] = node.groundtruth ? json(std::string(to_code(*node.groundtruth))) : json(nullptr);
    if (node.evidence) n["evidence"] = *node.evidence;
    if (node.evidence_incorrect) n["incorrect"] = true;
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
  return {{"id", graph.id}, {"building", graph.building}, {"nodes", nodes}, {"edges", edges}};
}

TopoGraph graph_from_json(const json& doc) {
  TopoGraph graph;
  try {
    graph.id = doc.at("id").get<std::string>();
    graph.building = doc.value("building", "");
    for (const auto& n : doc.at("nodes")) {
      TopoNode node;
      node.id = n.at("id").get<NodeId>();
      node.is_placeholder = n.value("placeholder", false);
      if (n.contains("category") && !n.at("category").is_null()) {
        node.groundtruth = category_from_code(n.at("category").get<std::string>());
      }
      if (n.contains("evidence")) {
        const auto values = n.at("evidence").get<std::vector<double>>();
        if (values.size() != kNumCategories) {
          throw DataError("node " + std::to_string(node.id) + ": evidence must have " +
                          std::to_string(kNumCategories) + " entries");
        }
        Evidence e;
        std::copy(values.begin(), values.end(), e.begin());
        node.evidence = e;
      }
      node.evidence_incorrect = n.value("incorrect", false);
      graph.nodes.push_back(node);
    }
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw DataError("edge entries must be [a, b] pairs");
      graph.edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed graph document: ") + ex.what());
  }
  check_invariants(graph);
  return graph;
}

void save_graph(const TopoGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(graph).dump(1) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

TopoGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw DataError(path.string() + ": " + ex.what());
  }
  return graph_from_json(doc);
}

TopoGraph swap_labels(const TopoGraph& graph, PlaceCategory a, PlaceCategory b) {
  TopoGraph out = graph;
  for (auto& node : out.nodes) {
    if (!node.groundtruth) continue;
    if (*node.groundtruth == a) {
      node.groundtruth = b;
    } else if (*node.groundtruth == b) {
      node.groundtruth = a;
    }
  }
  return out;
}

}  // namespace graphspn::graph
