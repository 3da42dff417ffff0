#include "graphspn/spn/inference.hpp"

#include <algorithm>
#include <cmath>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/logmath.hpp"

namespace graphspn::spn {

namespace {

void require_valid(const Spn& spn) {
  if (!spn.is_valid()) throw SpnError("inference requires a valid (rooted, complete, decomposable) SPN");
}

// Normalizes log-weights of a distribution in place and returns it in linear space.
std::vector<double> normalize_log(const std::vector<double>& logs) {
  const double z = log_sum_exp(logs);
  std::vector<double> out(logs.size());
  for (std::size_t k = 0; k < logs.size(); ++k) out[k] = std::exp(logs[k] - z);
  return out;
}

}  // namespace

void upward_pass(const Spn& spn, const LeafTable& leaves, PassMode mode,
                 std::vector<double>& values) {
  values.assign(spn.size(), kLogZero);
  for (NodeId id : spn.topological_order()) {
    const Node& node = spn.node(id);
    if (const auto* ind = std::get_if<IndicatorNode>(&node)) {
      values[id] = leaves.log_values[ind->var.value][ind->value];
    } else if (const auto* prod = std::get_if<ProductNode>(&node)) {
      double acc = 0.0;
      for (NodeId c : prod->children) acc += values[c];
      values[id] = acc;
    } else {
      const auto& sum = std::get<SumNode>(node);
      const std::size_t n = sum.children.size();
      if (mode == PassMode::kMax) {
        double best = kLogZero;
        for (std::size_t j = 0; j < n; ++j) {
          if (sum.weights[j] <= 0.0) continue;
          best = std::max(best, std::log(sum.weights[j]) + values[sum.children[j]]);
        }
        values[id] = best;
      } else {
        double hi = kLogZero;
        for (std::size_t j = 0; j < n; ++j) {
          if (sum.weights[j] > 0.0) hi = std::max(hi, values[sum.children[j]]);
        }
        if (hi == kLogZero) {
          values[id] = kLogZero;
          continue;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (sum.weights[j] > 0.0) acc += sum.weights[j] * std::exp(values[sum.children[j]] - hi);
        }
        values[id] = hi + safe_log(acc);
      }
    }
  }
}

void trace_max(const Spn& spn, std::span<const double> max_values, MaxTrace& trace,
               std::vector<NodeId>& stack, const TraceOptions& options) {
  trace.sum_choices.clear();
  trace.leaves.clear();
  stack.assign(1, spn.root());
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const Node& node = spn.node(id);
    if (std::holds_alternative<IndicatorNode>(node)) {
      trace.leaves.push_back(id);
    } else if (const auto* prod = std::get_if<ProductNode>(&node)) {
      // Reverse push keeps the visiting order equal to the child order.
      for (auto it = prod->children.rbegin(); it != prod->children.rend(); ++it) stack.push_back(*it);
    } else {
      const auto& sum = std::get<SumNode>(node);
      std::uint32_t best_j = 0;
      double best = kLogZero;
      bool found = false;
      for (std::size_t j = 0; j < sum.children.size(); ++j) {
        if (sum.weights[j] <= 0.0) continue;
        const double v = (options.unweighted ? 0.0 : std::log(sum.weights[j])) + max_values[sum.children[j]];
        if (!found || v > best) {
          best = v;
          best_j = static_cast<std::uint32_t>(j);
          found = true;
        }
      }
      if (options.tie_rng && found) {
        // Values equal up to rounding count as tied.
        const double slack = 1e-12 * std::max(1.0, std::abs(best));
        std::uint64_t ties = 0;
        for (std::size_t j = 0; j < sum.children.size(); ++j) {
          if (sum.weights[j] <= 0.0) continue;
          const double v = (options.unweighted ? 0.0 : std::log(sum.weights[j])) + max_values[sum.children[j]];
          if (v >= best - slack && uniform_index(*options.tie_rng, ++ties) == 0) best_j = static_cast<std::uint32_t>(j);
        }
      }
      trace.sum_choices.emplace_back(id, best_j);
      stack.push_back(sum.children[best_j]);
    }
  }
}

double eval_log(const Spn& spn, const Evidence& evidence) {
  Workspace ws;
  return eval_log(spn, evidence, ws);
}

double eval_log(const Spn& spn, const Evidence& evidence, Workspace& ws) {
  require_valid(spn);
  const LeafTable leaves = make_leaf_table(spn, evidence);
  upward_pass(spn, leaves, PassMode::kSum, ws.values);
  return ws.values[spn.root()];
}

std::vector<std::vector<double>> marginals(const Spn& spn, const Evidence& evidence) {
  Workspace ws;
  return marginals(spn, evidence, ws);
}

std::vector<std::vector<double>> marginals(const Spn& spn, const Evidence& evidence, Workspace& ws) {
  require_valid(spn);
  const LeafTable leaves = make_leaf_table(spn, evidence);
  upward_pass(spn, leaves, PassMode::kSum, ws.values);
  const auto& values = ws.values;
  if (values[spn.root()] == kLogZero) throw SpnError("evidence has zero likelihood");

  // Log partial derivatives of the root value, parents before children.
  auto& deriv = ws.derivatives;
  deriv.assign(spn.size(), kLogZero);
  deriv[spn.root()] = 0.0;
  std::vector<double> prefix;
  const auto& order = spn.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId id = *it;
    const double d = deriv[id];
    if (d == kLogZero) continue;
    const Node& node = spn.node(id);
    if (const auto* sum = std::get_if<SumNode>(&node)) {
      for (std::size_t j = 0; j < sum->children.size(); ++j) {
        if (sum->weights[j] <= 0.0) continue;
        const NodeId c = sum->children[j];
        deriv[c] = log_add_exp(deriv[c], d + std::log(sum->weights[j]));
      }
    } else if (const auto* prod = std::get_if<ProductNode>(&node)) {
      // Product of the siblings via prefix/suffix sums; -inf propagates exactly.
      const std::size_t n = prod->children.size();
      prefix.assign(n + 1, 0.0);
      for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + values[prod->children[j]];
      double suffix = 0.0;
      for (std::size_t j = n; j-- > 0;) {
        const NodeId c = prod->children[j];
        deriv[c] = log_add_exp(deriv[c], d + prefix[j] + suffix);
        suffix += values[c];
      }
    }
  }

  std::vector<std::vector<double>> post(spn.num_variables());
  for (std::size_t v = 0; v < spn.num_variables(); ++v) {
    post[v].assign(spn.variables()[v].cardinality, kLogZero);
  }
  for (NodeId id = 0; id < spn.size(); ++id) {
    if (const auto* ind = std::get_if<IndicatorNode>(&spn.node(id))) {
      auto& slot = post[ind->var.value][ind->value];
      slot = log_add_exp(slot, deriv[id] + leaves.log_values[ind->var.value][ind->value]);
    }
  }
  std::vector<std::vector<double>> out(spn.num_variables());
  for (std::size_t v = 0; v < spn.num_variables(); ++v) {
    // A variable outside the root scope is independent of the network.
    const bool reached = log_sum_exp(post[v]) != kLogZero;
    out[v] = normalize_log(reached ? post[v] : leaves.log_values[v]);
  }
  return out;
}

MpeResult mpe(const Spn& spn, const Evidence& evidence) {
  Workspace ws;
  return mpe(spn, evidence, ws);
}

MpeResult mpe(const Spn& spn, const Evidence& evidence, Workspace& ws) {
  require_valid(spn);
  const LeafTable leaves = make_leaf_table(spn, evidence);
  upward_pass(spn, leaves, PassMode::kMax, ws.values);
  if (ws.values[spn.root()] == kLogZero) throw SpnError("evidence has zero likelihood");

  MaxTrace trace;
  trace_max(spn, ws.values, trace, ws.stack);

  MpeResult result;
  result.log_value = ws.values[spn.root()];
  result.assignment.assign(spn.num_variables(), 0);
  std::vector<bool> assigned(spn.num_variables(), false);
  for (NodeId leaf : trace.leaves) {
    const auto& ind = std::get<IndicatorNode>(spn.node(leaf));
    result.assignment[ind.var.value] = ind.value;
    assigned[ind.var.value] = true;
  }
  for (std::size_t v = 0; v < spn.num_variables(); ++v) {
    if (assigned[v]) continue;
    const auto& row = leaves.log_values[v];
    result.assignment[v] =
        static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return result;
}

}  // namespace graphspn::spn
