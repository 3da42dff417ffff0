#include "graphspn/spn/serialize.hpp"

#include <fstream>
#include <map>

#include "graphspn/common/errors.hpp"

namespace graphspn::spn {

using nlohmann::json;

json to_json(const Spn& spn) {
  json vars = json::array();
  for (const auto& v : spn.variables()) {
    vars.push_back({{"id", v.id.value}, {"cardinality", v.cardinality}});
  }
  json nodes = json::array();
  for (NodeId id = 0; id < spn.size(); ++id) {
    const Node& node = spn.node(id);
    json entry = {{"id", id}};
    if (const auto* ind = std::get_if<IndicatorNode>(&node)) {
      entry["kind"] = "indicator";
      entry["var"] = ind->var.value;
      entry["value"] = ind->value;
    } else if (const auto* sum = std::get_if<SumNode>(&node)) {
      entry["kind"] = "sum";
      entry["children"] = sum->children;
      entry["weights"] = sum->weights;
    } else {
      entry["kind"] = "product";
      entry["children"] = std::get<ProductNode>(node).children;
    }
    nodes.push_back(std::move(entry));
  }
  return {{"variables", std::move(vars)}, {"nodes", std::move(nodes)}, {"root", spn.root()}};
}

Spn spn_from_json(const json& doc) {
  try {
    std::vector<CategoricalVariable> vars;
    for (const auto& v : doc.at("variables")) {
      vars.push_back({VariableId{v.at("id").get<std::uint32_t>()}, v.at("cardinality").get<std::uint32_t>()});
    }
    // Accept nodes in any order; ids must be dense.
    std::map<NodeId, Node> by_id;
    for (const auto& n : doc.at("nodes")) {
      const auto id = n.at("id").get<NodeId>();
      const auto kind = n.at("kind").get<std::string>();
      Node node;
      if (kind == "indicator") {
        node = IndicatorNode{VariableId{n.at("var").get<std::uint32_t>()}, n.at("value").get<std::uint32_t>()};
      } else if (kind == "sum") {
        node = SumNode{n.at("children").get<std::vector<NodeId>>(), n.at("weights").get<std::vector<double>>()};
      } else if (kind == "product") {
        node = ProductNode{n.at("children").get<std::vector<NodeId>>()};
      } else {
        throw DataError("unknown SPN node kind '" + kind + "'");
      }
      if (!by_id.emplace(id, std::move(node)).second) {
        throw DataError("duplicate SPN node id " + std::to_string(id));
      }
    }
    std::vector<Node> nodes;
    nodes.reserve(by_id.size());
    for (auto& [id, node] : by_id) {
      if (id != nodes.size()) throw DataError("SPN node ids must be dense 0..N-1");
      nodes.push_back(std::move(node));
    }
    return Spn(std::move(vars), std::move(nodes), doc.at("root").get<NodeId>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed SPN document: ") + e.what());
  }
}

void save_spn(const Spn& spn, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(spn).dump() << '\n';
}

Spn load_spn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return spn_from_json(doc);
}

}  // namespace graphspn::spn
