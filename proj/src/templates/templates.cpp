#include "graphspn/templates/templates.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "graphspn/common/errors.hpp"

namespace graphspn::templates {

using nlohmann::json;

void check(const SubGraphTemplate& t) {
  const std::string who = "template '" + t.id + "'";
  if (t.id.empty()) throw ConfigError("template without id");
  if (t.node_count < 1 || t.node_count > kMaxTemplateNodes) throw ConfigError(who + ": node_count must be 1..5");
  std::set<std::pair<int, int>> seen;
  std::vector<int> parent(t.node_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : t.edges) {
    if (a < 0 || b < 0 || a >= t.node_count || b >= t.node_count) throw ConfigError(who + ": edge slot out of range");
    if (a == b) throw ConfigError(who + ": self-loop");
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) throw ConfigError(who + ": duplicate edge");
    parent[find(a)] = find(b);
  }
  for (int i = 1; i < t.node_count; ++i) {
    if (find(i) != find(0)) throw ConfigError(who + ": not connected");
  }
}

std::vector<SubGraphTemplate> default_template_set() {
  return {
      {"PATH5", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 5},
      {"STAR4", 4, {{0, 1}, {0, 2}, {0, 3}}, 4},
      {"PATH3", 3, {{0, 1}, {1, 2}}, 3},
      {"PATH2", 2, {{0, 1}}, 2},
      {"SINGLE", 1, {}, 1},
  };
}

std::vector<SubGraphTemplate> by_decreasing_rank(std::vector<SubGraphTemplate> templates) {
  std::stable_sort(templates.begin(), templates.end(),
                   [](const auto& a, const auto& b) { return a.complexity_rank > b.complexity_rank; });
  return templates;
}

std::vector<std::vector<int>> automorphisms(const SubGraphTemplate& t) {
  std::set<std::pair<int, int>> edges;
  for (auto [a, b] : t.edges) edges.emplace(std::min(a, b), std::max(a, b));
  std::vector<int> perm(t.node_count);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (auto [a, b] : edges) {
      if (!edges.count({std::min(perm[a], perm[b]), std::max(perm[a], perm[b])})) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<SubGraphTemplate> templates_from_json(const json& doc) {
  if (!doc.is_array()) throw ConfigError("template set must be a JSON array");
  std::vector<SubGraphTemplate> out;
  std::set<std::string> ids;
  for (const auto& entry : doc) {
    SubGraphTemplate t;
    try {
      t.id = entry.at("id").get<std::string>();
      t.node_count = entry.at("node_count").get<int>();
      t.complexity_rank = entry.at("rank").get<int>();
      for (const auto& e : entry.value("edges", json::array())) {
        t.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
    } catch (const json::exception& ex) {
      throw ConfigError(std::string("malformed template entry: ") + ex.what());
    }
    check(t);
    if (!ids.insert(t.id).second) throw ConfigError("duplicate template id '" + t.id + "'");
    out.push_back(std::move(t));
  }
  if (out.empty()) throw ConfigError("template set is empty");
  return out;
}

json to_json(const std::vector<SubGraphTemplate>& templates) {
  json out = json::array();
  for (const auto& t : templates) {
    json edges = json::array();
    for (auto [a, b] : t.edges) edges.push_back({a, b});
    out.push_back({{"id", t.id}, {"node_count", t.node_count}, {"edges", edges}, {"rank", t.complexity_rank}});
  }
  return out;
}

json to_json(const Decomposition& d) {
  json comps = json::array();
  for (const auto& c : d.components) comps.push_back({{"template", c.template_id}, {"nodes", c.node_ids}});
  return {{"components", comps}};
}

Decomposition decomposition_from_json(const json& doc) {
  Decomposition d;
  try {
    for (const auto& c : doc.at("components")) {
      d.components.push_back({c.at("template").get<std::string>(), c.at("nodes").get<std::vector<graph::NodeId>>()});
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed decomposition: ") + ex.what());
  }
  return d;
}

}  // namespace graphspn::templates
