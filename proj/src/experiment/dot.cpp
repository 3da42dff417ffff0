#include "graphspn/experiment/dot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>

#include "graphspn/common/errors.hpp"

namespace graphspn::experiment {

using graph::kNumCategories;
using nlohmann::json;

namespace {

constexpr std::array<const char*, kNumCategories> kColors = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                                             "#fdb462", "#b3de69", "#fccde5", "#bc80bd", "#ccebc5"};

std::uint32_t argmax(const std::vector<double>& p) {
  return static_cast<std::uint32_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

std::string to_dot(const graph::TopoGraph& g, const PosteriorMap& posteriors) {
  std::string out = "graph \"" + g.id + "\" {\n  node [shape=circle, style=filled, fontsize=10];\n";
  char buf[64];
  for (const auto& node : g.nodes) {
    std::string label = std::to_string(node.id);
    std::optional<std::uint32_t> cls;
    const auto post = posteriors.find(node.id);
    if (post != posteriors.end()) {
      const auto& p = post->second;
      cls = argmax(p);
      std::vector<std::uint32_t> order(p.size());
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return p[a] > p[b]; });
      for (std::size_t j = 0; j < std::min<std::size_t>(3, order.size()); ++j) {
        std::snprintf(buf, sizeof buf, "\\n%s %.2f", std::string(graph::to_code(graph::category_at(order[j]))).c_str(),
                      p[order[j]]);
        label += buf;
      }
    } else if (node.groundtruth) {
      cls = graph::index_of(*node.groundtruth);
      label += "\\n" + std::string(graph::to_code(*node.groundtruth));
    } else if (node.evidence) {
      cls = argmax(std::vector<double>(node.evidence->begin(), node.evidence->end()));
      label += "\\n" + std::string(graph::to_code(graph::category_at(*cls))) + "?";
    }
    out += "  n" + std::to_string(node.id) + " [label=\"" + label + "\", fillcolor=\"" +
           (cls && *cls < kNumCategories ? kColors[*cls] : "#d9d9d9") + "\"" +
           (node.is_placeholder ? ", style=\"filled,dashed\"" : "") + "];\n";
  }
  for (const auto& [a, b] : g.edges) out += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

PosteriorMap posteriors_from_json(const json& doc) {
  PosteriorMap out;
  try {
    if (doc.is_object() && doc.contains("placeholders")) return posteriors_from_json(doc.at("placeholders"));
    if (doc.is_object()) {
      for (const auto& [key, value] : doc.items()) {
        out[std::stoll(key)] = value.get<std::vector<double>>();
      }
    } else if (doc.is_array()) {
      for (const auto& item : doc) out[item.at("node").get<graph::NodeId>()] = item.at("posterior").get<std::vector<double>>();
    } else {
      throw DataError("posteriors must be an object or a list");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed posteriors: ") + e.what());
  } catch (const std::logic_error&) {
    throw DataError("posterior keys must be node ids");
  }
  for (const auto& [id, p] : out) {
    if (p.size() != kNumCategories) throw DataError("posterior of node " + std::to_string(id) + " needs 10 entries");
  }
  return out;
}

}  // namespace graphspn::experiment
