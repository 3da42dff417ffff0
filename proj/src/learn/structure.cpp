#include "graphspn/learn/structure.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"

namespace graphspn::learn {

using spn::NodeId;
using spn::VariableId;

void check(const StructureParams& params) {
  if (params.num_decompositions_per_scope < 1) throw ConfigError("num_decompositions_per_scope must be >= 1");
  if (params.num_subsets_per_decomposition < 2) throw ConfigError("num_subsets_per_decomposition must be >= 2");
  if (params.num_sums_per_subscope < 1) throw ConfigError("num_sums_per_subscope must be >= 1");
}

namespace {

class DenseGenerator {
 public:
  DenseGenerator(std::span<const spn::CategoricalVariable> variables, const StructureParams& params)
      : params_(params),
        rng_(params.rng_seed),
        builder_({variables.begin(), variables.end()}),
        variables_(variables.begin(), variables.end()),
        indicators_(variables.size()) {}

  spn::Spn run() && {
    std::vector<std::uint32_t> all(variables_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    const NodeId root = sums_for(all, 1).front();
    return std::move(builder_).build(root);
  }

 private:
  NodeId indicator(std::uint32_t var, std::uint32_t value) {
    auto& row = indicators_[var];
    if (row.empty()) {
      row.resize(variables_[var].cardinality);
      for (std::uint32_t k = 0; k < row.size(); ++k) row[k] = builder_.add_indicator(VariableId{var}, k);
    }
    return row[value];
  }

  const std::vector<NodeId>& sums_for(const std::vector<std::uint32_t>& scope, int count) {
    if (auto it = memo_.find(scope); it != memo_.end()) return it->second;

    std::vector<NodeId> children;
    if (scope.size() == 1) {
      const std::uint32_t var = scope.front();
      for (std::uint32_t k = 0; k < variables_[var].cardinality; ++k) children.push_back(indicator(var, k));
    } else {
      std::set<std::vector<std::vector<std::uint32_t>>> seen;
      for (int d = 0; d < params_.num_decompositions_per_scope; ++d) {
        auto parts = random_partition(scope);
        if (!seen.insert(parts).second) continue;
        std::vector<std::vector<NodeId>> options;
        for (const auto& part : parts) options.push_back(sums_for(part, params_.num_sums_per_subscope));
        append_products(options, children);
      }
    }

    std::vector<NodeId> sums;
    const std::vector<double> uniform(children.size(), 1.0 / static_cast<double>(children.size()));
    for (int i = 0; i < count; ++i) sums.push_back(builder_.add_sum(children, uniform));
    return memo_.emplace(scope, std::move(sums)).first->second;
  }

  // Random split into min(k, |scope|) non-empty subsets, each sorted, the
  // list of subsets sorted too so identical partitions compare equal.
  std::vector<std::vector<std::uint32_t>> random_partition(std::vector<std::uint32_t> scope) {
    const std::size_t k = std::min<std::size_t>(params_.num_subsets_per_decomposition, scope.size());
    shuffle(scope.begin(), scope.end(), rng_);
    std::vector<std::vector<std::uint32_t>> parts(k);
    for (std::size_t i = 0; i < scope.size(); ++i) {
      const std::size_t target = i < k ? i : uniform_index(rng_, k);
      parts[target].push_back(scope[i]);
    }
    for (auto& p : parts) std::sort(p.begin(), p.end());
    std::sort(parts.begin(), parts.end());
    return parts;
  }

  // One product per element of the cartesian product of the options.
  void append_products(const std::vector<std::vector<NodeId>>& options, std::vector<NodeId>& out) {
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
      std::vector<NodeId> kids(options.size());
      for (std::size_t i = 0; i < options.size(); ++i) kids[i] = options[i][idx[i]];
      out.push_back(builder_.add_product(std::move(kids)));
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == options[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }

  StructureParams params_;
  Rng rng_;
  spn::SpnBuilder builder_;
  std::vector<spn::CategoricalVariable> variables_;
  std::vector<std::vector<NodeId>> indicators_;
  std::map<std::vector<std::uint32_t>, std::vector<NodeId>> memo_;
};

}  // namespace

spn::Spn generate_dense_structure(std::span<const spn::CategoricalVariable> variables,
                                  const StructureParams& params) {
  if (variables.empty()) throw SpnError("cannot generate a structure over an empty variable set");
  check(params);
  return DenseGenerator(variables, params).run();
}

}  // namespace graphspn::learn
