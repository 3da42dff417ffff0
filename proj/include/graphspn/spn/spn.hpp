#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace graphspn::spn {

struct VariableId {
  std::uint32_t value = 0;
  auto operator<=>(const VariableId&) const = default;
};

using NodeId = std::uint32_t;

struct CategoricalVariable {
  VariableId id;
  std::uint32_t cardinality = 2;
};

struct IndicatorNode {
  VariableId var;
  std::uint32_t value = 0;
};

struct SumNode {
  std::vector<NodeId> children;
  std::vector<double> weights;
};

struct ProductNode {
  std::vector<NodeId> children;
};

using Node = std::variant<IndicatorNode, SumNode, ProductNode>;

enum class Violation {
  kCycle,
  kUnreachable,
  kIncomplete,
  kNotDecomposable,
};

std::string to_string(Violation v);

struct ValidityReport {
  bool is_rooted_dag = true;
  bool is_complete = true;
  bool is_decomposable = true;
  std::vector<std::pair<NodeId, Violation>> offending_nodes;

  bool valid() const { return is_rooted_dag && is_complete && is_decomposable; }
};

/// A sum-product network over categorical variables, stored as a flat node
/// table. Variables are numbered densely 0..V-1.
///
/// Construction checks referential integrity (children resolve, weights are
/// finite and non-negative, indicator values fit the variable) and throws
/// SpnError otherwise. Structural validity (acyclicity, reachability,
/// completeness, decomposability) is computed once and reported through
/// validity(); inference refuses invalid networks.
///
/// Only sum weights can change after construction, so the cached report and
/// topological order stay correct.
class Spn {
 public:
  Spn(std::vector<CategoricalVariable> variables, std::vector<Node> nodes, NodeId root);

  const std::vector<CategoricalVariable>& variables() const { return variables_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::uint32_t cardinality(VariableId v) const { return variables_[v.value].cardinality; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return root_; }

  /// Children before parents. Empty when the graph has a cycle.
  const std::vector<NodeId>& topological_order() const { return topo_order_; }

  const ValidityReport& validity() const { return validity_; }
  bool is_valid() const { return validity_.valid(); }

  /// Sorted scope of a node; throws SpnError for an unknown id.
  const std::vector<VariableId>& scope(NodeId id) const;

  void set_weights(NodeId sum, std::span<const double> weights);
  void set_weight(NodeId sum, std::size_t child_index, double weight);

  std::size_t num_edges() const;

 private:
  void check_references() const;
  void compute_order();
  void compute_scopes();
  void compute_validity();

  std::vector<CategoricalVariable> variables_;
  std::vector<Node> nodes_;
  NodeId root_;
  std::vector<NodeId> topo_order_;
  std::vector<std::vector<VariableId>> scopes_;
  ValidityReport validity_;
};

std::vector<VariableId> scope(const Spn& spn, NodeId id);
ValidityReport validate(const Spn& spn);

/// Returns a copy whose sums all have unit-sum weights and which computes
/// the same distribution (values rescaled by one global constant). For sums
/// over normalized children this is division by the weight total. Throws
/// SpnError on a sum with all-zero weights or a cyclic network.
Spn normalize_weights(const Spn& spn);

/// Incremental construction helper. Node ids are assigned in insertion order.
class SpnBuilder {
 public:
  explicit SpnBuilder(std::vector<CategoricalVariable> variables);

  NodeId add_indicator(VariableId var, std::uint32_t value);
  NodeId add_sum(std::vector<NodeId> children, std::vector<double> weights);
  NodeId add_product(std::vector<NodeId> children);

  std::size_t size() const { return nodes_.size(); }

  Spn build(NodeId root) &&;

 private:
  std::vector<CategoricalVariable> variables_;
  std::vector<Node> nodes_;
};

/// Variables 0..n-1, all with the same cardinality.
std::vector<CategoricalVariable> make_variables(std::size_t n, std::uint32_t cardinality);

}  // namespace graphspn::spn
