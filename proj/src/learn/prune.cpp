#include "graphspn/learn/prune.hpp"

#include <algorithm>
#include <limits>

namespace graphspn::learn {

using spn::NodeId;

spn::Spn prune(const spn::Spn& source, double epsilon) {
  std::vector<spn::Node> nodes = source.nodes();
  for (auto& node : nodes) {
    auto* sum = std::get_if<spn::SumNode>(&node);
    if (!sum) continue;
    const auto heaviest = static_cast<std::size_t>(
        std::max_element(sum->weights.begin(), sum->weights.end()) - sum->weights.begin());
    spn::SumNode kept;
    for (std::size_t j = 0; j < sum->children.size(); ++j) {
      if (sum->weights[j] >= epsilon) {
        kept.children.push_back(sum->children[j]);
        kept.weights.push_back(sum->weights[j]);
      }
    }
    if (kept.children.empty()) {
      kept.children.push_back(sum->children[heaviest]);
      kept.weights.push_back(sum->weights[heaviest]);
    }
    double total = 0.0;
    for (double w : kept.weights) total += w;
    if (total > 0.0) {
      for (double& w : kept.weights) w /= total;
    } else {
      std::fill(kept.weights.begin(), kept.weights.end(), 1.0 / static_cast<double>(kept.weights.size()));
    }
    *sum = std::move(kept);
  }

  // Reachability from the root after edge removal.
  std::vector<bool> reached(nodes.size(), false);
  std::vector<NodeId> frontier{source.root()};
  reached[source.root()] = true;
  while (!frontier.empty()) {
    const NodeId id = frontier.back();
    frontier.pop_back();
    const std::vector<NodeId>* children = nullptr;
    if (const auto* s = std::get_if<spn::SumNode>(&nodes[id])) children = &s->children;
    if (const auto* p = std::get_if<spn::ProductNode>(&nodes[id])) children = &p->children;
    if (!children) continue;
    for (NodeId c : *children) {
      if (!reached[c]) {
        reached[c] = true;
        frontier.push_back(c);
      }
    }
  }

  constexpr NodeId kDropped = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> remap(nodes.size(), kDropped);
  NodeId next = 0;
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (reached[id]) remap[id] = next++;
  }
  std::vector<spn::Node> kept;
  kept.reserve(next);
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (!reached[id]) continue;
    spn::Node node = std::move(nodes[id]);
    if (auto* s = std::get_if<spn::SumNode>(&node)) {
      for (NodeId& c : s->children) c = remap[c];
    } else if (auto* p = std::get_if<spn::ProductNode>(&node)) {
      for (NodeId& c : p->children) c = remap[c];
    }
    kept.push_back(std::move(node));
  }
  return spn::Spn(source.variables(), std::move(kept), remap[source.root()]);
}

}  // namespace graphspn::learn
