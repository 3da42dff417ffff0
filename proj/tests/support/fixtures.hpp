#pragma once

#include "graphspn/spn/spn.hpp"

namespace graphspn::testing {

// Naive Bayes mixture P(X1, X2) with three components over two binary
// variables. Only the topology is fixed; the weights are arbitrary.
inline spn::Spn naive_bayes_mixture() {
  spn::SpnBuilder b(spn::make_variables(2, 2));
  const auto x1a = b.add_indicator(spn::VariableId{0}, 0);
  const auto x1b = b.add_indicator(spn::VariableId{0}, 1);
  const auto x2a = b.add_indicator(spn::VariableId{1}, 0);
  const auto x2b = b.add_indicator(spn::VariableId{1}, 1);
  const double p1[3] = {0.8, 0.3, 0.1};
  const double p2[3] = {0.6, 0.2, 0.9};
  std::vector<spn::NodeId> comps;
  for (int c = 0; c < 3; ++c) {
    const auto s1 = b.add_sum({x1a, x1b}, {p1[c], 1.0 - p1[c]});
    const auto s2 = b.add_sum({x2a, x2b}, {p2[c], 1.0 - p2[c]});
    comps.push_back(b.add_product({s1, s2}));
  }
  const auto root = b.add_sum(comps, {0.5, 0.3, 0.2});
  return std::move(b).build(root);
}

}  // namespace graphspn::testing
