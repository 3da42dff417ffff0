#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "graphspn/spn/spn.hpp"

namespace graphspn::spn {

struct Marginalized {};

struct Observed {
  std::uint32_t value = 0;
};

// Per-state multipliers applied to the variable's indicator leaves.
struct Soft {
  std::vector<double> multipliers;
};

using VariableEvidence = std::variant<Marginalized, Observed, Soft>;

class Evidence {
 public:
  Evidence() = default;
  explicit Evidence(std::size_t num_variables) : entries_(num_variables, Marginalized{}) {}

  static Evidence marginalized(std::size_t num_variables) { return Evidence(num_variables); }
  static Evidence observed(const std::vector<std::uint32_t>& assignment);

  std::size_t size() const { return entries_.size(); }
  const VariableEvidence& operator[](std::size_t i) const { return entries_[i]; }

  void set_marginalized(std::size_t var) { entries_.at(var) = Marginalized{}; }
  void set_observed(std::size_t var, std::uint32_t value) { entries_.at(var) = Observed{value}; }
  void set_soft(std::size_t var, std::vector<double> multipliers) {
    entries_.at(var) = Soft{std::move(multipliers)};
  }
  void set(std::size_t var, VariableEvidence entry) { entries_.at(var) = std::move(entry); }

 private:
  std::vector<VariableEvidence> entries_;
};

/// Log-multiplier of every (variable, value) indicator under some evidence.
/// Row v holds cardinality(v) entries.
struct LeafTable {
  std::vector<std::vector<double>> log_values;
};

/// Checks the evidence against the network's variable table and expands it to
/// indicator values. Throws SpnError on count or cardinality mismatch, or on
/// soft multipliers that are negative, non-finite or all zero.
LeafTable make_leaf_table(const Spn& spn, const Evidence& evidence);

}  // namespace graphspn::spn
