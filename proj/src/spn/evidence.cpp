#include "graphspn/spn/evidence.hpp"

#include <cmath>
#include <string>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/logmath.hpp"

namespace graphspn::spn {

Evidence Evidence::observed(const std::vector<std::uint32_t>& assignment) {
  Evidence e(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) e.set_observed(i, assignment[i]);
  return e;
}

LeafTable make_leaf_table(const Spn& spn, const Evidence& evidence) {
  if (evidence.size() != spn.num_variables()) {
    throw SpnError("evidence covers " + std::to_string(evidence.size()) + " variables, SPN has " +
                   std::to_string(spn.num_variables()));
  }
  LeafTable table;
  table.log_values.resize(spn.num_variables());
  for (std::size_t v = 0; v < spn.num_variables(); ++v) {
    const std::uint32_t card = spn.variables()[v].cardinality;
    auto& row = table.log_values[v];
    row.assign(card, 0.0);
    const auto& entry = evidence[v];
    if (const auto* obs = std::get_if<Observed>(&entry)) {
      if (obs->value >= card) {
        throw SpnError("observed value out of range for variable " + std::to_string(v));
      }
      row.assign(card, kLogZero);
      row[obs->value] = 0.0;
    } else if (const auto* soft = std::get_if<Soft>(&entry)) {
      if (soft->multipliers.size() != card) {
        throw SpnError("soft evidence length mismatch for variable " + std::to_string(v));
      }
      bool any_positive = false;
      for (std::uint32_t k = 0; k < card; ++k) {
        const double m = soft->multipliers[k];
        if (!std::isfinite(m) || m < 0.0) {
          throw SpnError("soft evidence must be finite and non-negative (variable " +
                         std::to_string(v) + ")");
        }
        any_positive = any_positive || m > 0.0;
        row[k] = safe_log(m);
      }
      if (!any_positive) {
        throw SpnError("soft evidence is all zero for variable " + std::to_string(v));
      }
    }
  }
  return table;
}

}  // namespace graphspn::spn
