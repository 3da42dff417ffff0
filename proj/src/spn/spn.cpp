#include "graphspn/spn/spn.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "graphspn/common/errors.hpp"

namespace graphspn::spn {

namespace {

const std::vector<NodeId>* children_of(const Node& node) {
  if (const auto* s = std::get_if<SumNode>(&node)) return &s->children;
  if (const auto* p = std::get_if<ProductNode>(&node)) return &p->children;
  return nullptr;
}

std::vector<VariableId> merge_sorted(const std::vector<VariableId>& a,
                                     const std::vector<VariableId>& b) {
  std::vector<VariableId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::string to_string(Violation v) {
  switch (v) {
    case Violation::kCycle:
      return "cycle";
    case Violation::kUnreachable:
      return "unreachable";
    case Violation::kIncomplete:
      return "incomplete";
    case Violation::kNotDecomposable:
      return "not_decomposable";
  }
  return "unknown";
}

Spn::Spn(std::vector<CategoricalVariable> variables, std::vector<Node> nodes, NodeId root)
    : variables_(std::move(variables)), nodes_(std::move(nodes)), root_(root) {
  check_references();
  compute_order();
  compute_scopes();
  compute_validity();
}

void Spn::check_references() const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].id.value != i) {
      throw SpnError("variable ids must be dense 0..V-1; entry " + std::to_string(i) +
                     " has id " + std::to_string(variables_[i].id.value));
    }
    if (variables_[i].cardinality < 2) {
      throw SpnError("variable " + std::to_string(i) + " has cardinality < 2");
    }
  }
  if (nodes_.empty()) throw SpnError("SPN has no nodes");
  if (root_ >= nodes_.size()) throw SpnError("root id out of range");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto where = " (node " + std::to_string(i) + ")";
    if (const auto* ind = std::get_if<IndicatorNode>(&nodes_[i])) {
      if (ind->var.value >= variables_.size()) throw SpnError("indicator on unknown variable" + where);
      if (ind->value >= variables_[ind->var.value].cardinality) {
        throw SpnError("indicator value exceeds cardinality" + where);
      }
      continue;
    }
    const auto& children = *children_of(nodes_[i]);
    if (children.empty()) throw SpnError("internal node without children" + where);
    for (NodeId c : children) {
      if (c >= nodes_.size()) throw SpnError("child reference out of range" + where);
    }
    if (const auto* sum = std::get_if<SumNode>(&nodes_[i])) {
      if (sum->weights.size() != children.size()) {
        throw SpnError("sum weight count differs from child count" + where);
      }
      for (double w : sum->weights) {
        if (!std::isfinite(w) || w < 0.0) throw SpnError("sum weight must be finite and >= 0" + where);
      }
    }
  }
}

void Spn::compute_order() {
  // Iterative DFS post-order over every node; 0 = new, 1 = on stack, 2 = done.
  const std::size_t n = nodes_.size();
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  topo_order_.clear();
  topo_order_.reserve(n);
  bool cyclic = false;
  for (NodeId start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    stack.emplace_back(start, 0);
    state[start] = 1;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const auto* children = children_of(nodes_[id]);
      if (children && next < children->size()) {
        const NodeId c = (*children)[next++];
        if (state[c] == 0) {
          state[c] = 1;
          stack.emplace_back(c, 0);
        } else if (state[c] == 1) {
          cyclic = true;
          validity_.offending_nodes.emplace_back(c, Violation::kCycle);
        }
        continue;
      }
      state[id] = 2;
      topo_order_.push_back(id);
      stack.pop_back();
    }
  }
  if (cyclic) {
    validity_.is_rooted_dag = false;
    topo_order_.clear();
  }

  std::vector<bool> reached(n, false);
  std::vector<NodeId> frontier{root_};
  reached[root_] = true;
  while (!frontier.empty()) {
    const NodeId id = frontier.back();
    frontier.pop_back();
    if (const auto* children = children_of(nodes_[id])) {
      for (NodeId c : *children) {
        if (!reached[c]) {
          reached[c] = true;
          frontier.push_back(c);
        }
      }
    }
  }
  for (NodeId id = 0; id < n; ++id) {
    if (!reached[id]) {
      validity_.is_rooted_dag = false;
      validity_.offending_nodes.emplace_back(id, Violation::kUnreachable);
    }
  }
}

void Spn::compute_scopes() {
  const std::size_t n = nodes_.size();
  scopes_.assign(n, {});
  auto update = [&](NodeId id) {
    if (const auto* ind = std::get_if<IndicatorNode>(&nodes_[id])) {
      scopes_[id] = {ind->var};
      return false;
    }
    std::vector<VariableId> acc;
    for (NodeId c : *children_of(nodes_[id])) acc = merge_sorted(acc, scopes_[c]);
    if (acc == scopes_[id]) return false;
    scopes_[id] = std::move(acc);
    return true;
  };
  if (!topo_order_.empty()) {
    for (NodeId id : topo_order_) update(id);
    return;
  }
  // Cyclic graph: iterate to the (finite) fixpoint so the remaining checks
  // still produce meaningful reports.
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId id = 0; id < n; ++id) changed = update(id) || changed;
  }
}

void Spn::compute_validity() {
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (const auto* sum = std::get_if<SumNode>(&nodes_[id])) {
      const auto& first = scopes_[sum->children.front()];
      for (NodeId c : sum->children) {
        if (scopes_[c] != first) {
          validity_.is_complete = false;
          validity_.offending_nodes.emplace_back(id, Violation::kIncomplete);
          break;
        }
      }
    } else if (const auto* prod = std::get_if<ProductNode>(&nodes_[id])) {
      std::size_t total = 0;
      for (NodeId c : prod->children) total += scopes_[c].size();
      if (total != scopes_[id].size()) {
        validity_.is_decomposable = false;
        validity_.offending_nodes.emplace_back(id, Violation::kNotDecomposable);
      }
    }
  }
}

const std::vector<VariableId>& Spn::scope(NodeId id) const {
  if (id >= nodes_.size()) throw SpnError("unknown node id " + std::to_string(id));
  return scopes_[id];
}

void Spn::set_weights(NodeId sum, std::span<const double> weights) {
  auto* node = sum < nodes_.size() ? std::get_if<SumNode>(&nodes_[sum]) : nullptr;
  if (!node) throw SpnError("node " + std::to_string(sum) + " is not a sum");
  if (weights.size() != node->weights.size()) throw SpnError("weight count mismatch");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw SpnError("sum weight must be finite and >= 0");
  }
  std::copy(weights.begin(), weights.end(), node->weights.begin());
}

void Spn::set_weight(NodeId sum, std::size_t child_index, double weight) {
  auto* node = sum < nodes_.size() ? std::get_if<SumNode>(&nodes_[sum]) : nullptr;
  if (!node) throw SpnError("node " + std::to_string(sum) + " is not a sum");
  if (child_index >= node->weights.size()) throw SpnError("child index out of range");
  if (!std::isfinite(weight) || weight < 0.0) throw SpnError("sum weight must be finite and >= 0");
  node->weights[child_index] = weight;
}

std::size_t Spn::num_edges() const {
  std::size_t e = 0;
  for (const auto& node : nodes_) {
    if (const auto* children = children_of(node)) e += children->size();
  }
  return e;
}

std::vector<VariableId> scope(const Spn& spn, NodeId id) { return spn.scope(id); }

ValidityReport validate(const Spn& spn) { return spn.validity(); }

Spn normalize_weights(const Spn& spn) {
  // Bottom-up: each node's partition value Z (all indicators set to 1) is
  // folded into its parents' weights, w'_j = w_j Z_j / Z. The result has
  // unit-sum weights at every sum and computes S(x) / Z_root, so ratios of
  // values under the same evidence are unchanged. When every child is already
  // normalized (Z = 1) this is plain division by the weight total.
  if (spn.topological_order().empty()) throw SpnError("cannot normalize a cyclic SPN");
  std::vector<Node> nodes = spn.nodes();
  std::vector<double> log_z(nodes.size(), 0.0);
  for (NodeId id : spn.topological_order()) {
    if (auto* prod = std::get_if<ProductNode>(&nodes[id])) {
      double acc = 0.0;
      for (NodeId c : prod->children) acc += log_z[c];
      log_z[id] = acc;
    } else if (auto* sum = std::get_if<SumNode>(&nodes[id])) {
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < sum->children.size(); ++j) {
        if (sum->weights[j] > 0.0) hi = std::max(hi, log_z[sum->children[j]]);
      }
      std::vector<double> scaled(sum->children.size(), 0.0);
      double total = 0.0;
      if (std::isfinite(hi)) {
        for (std::size_t j = 0; j < sum->children.size(); ++j) {
          scaled[j] = sum->weights[j] * std::exp(log_z[sum->children[j]] - hi);
          total += scaled[j];
        }
      }
      if (!(total > 0.0)) throw SpnError("sum node " + std::to_string(id) + " has all-zero weights");
      for (std::size_t j = 0; j < scaled.size(); ++j) sum->weights[j] = scaled[j] / total;
      log_z[id] = hi + std::log(total);
    }
  }
  return Spn(spn.variables(), std::move(nodes), spn.root());
}

SpnBuilder::SpnBuilder(std::vector<CategoricalVariable> variables)
    : variables_(std::move(variables)) {}

NodeId SpnBuilder::add_indicator(VariableId var, std::uint32_t value) {
  nodes_.emplace_back(IndicatorNode{var, value});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SpnBuilder::add_sum(std::vector<NodeId> children, std::vector<double> weights) {
  nodes_.emplace_back(SumNode{std::move(children), std::move(weights)});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SpnBuilder::add_product(std::vector<NodeId> children) {
  nodes_.emplace_back(ProductNode{std::move(children)});
  return static_cast<NodeId>(nodes_.size() - 1);
}

Spn SpnBuilder::build(NodeId root) && {
  return Spn(std::move(variables_), std::move(nodes_), root);
}

std::vector<CategoricalVariable> make_variables(std::size_t n, std::uint32_t cardinality) {
  std::vector<CategoricalVariable> vars(n);
  for (std::size_t i = 0; i < n; ++i) {
    vars[i] = {VariableId{static_cast<std::uint32_t>(i)}, cardinality};
  }
  return vars;
}

}  // namespace graphspn::spn
