#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::templates {

struct SubGraphTemplate {
  std::string id;
  int node_count = 1;
  std::vector<std::pair<int, int>> edges;
  int complexity_rank = 1;  // higher is matched first

  bool operator==(const SubGraphTemplate&) const = default;
};

inline constexpr int kMaxTemplateNodes = 5;

// Throws ConfigError unless the template is a simple connected graph on
// 1..5 nodes.
void check(const SubGraphTemplate& t);

// PATH5, STAR4, PATH3, PATH2, SINGLE, in decreasing rank.
std::vector<SubGraphTemplate> default_template_set();

// Templates sorted by decreasing rank (stable for equal ranks).
std::vector<SubGraphTemplate> by_decreasing_rank(std::vector<SubGraphTemplate> templates);

// All slot permutations p with {p(a), p(b)} an edge for every edge {a, b};
// the identity comes first.
std::vector<std::vector<int>> automorphisms(const SubGraphTemplate& t);

// JSON list of {id, node_count, edges, rank}; ids must be unique.
std::vector<SubGraphTemplate> templates_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const std::vector<SubGraphTemplate>& templates);

struct Component {
  std::string template_id;
  std::vector<graph::NodeId> node_ids;  // slot t -> graph node id

  bool operator==(const Component&) const = default;
};

struct Decomposition {
  std::vector<Component> components;

  bool operator==(const Decomposition&) const = default;
};

nlohmann::json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& doc);

}  // namespace graphspn::templates
