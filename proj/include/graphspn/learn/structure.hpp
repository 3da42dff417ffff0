#pragma once

#include <cstdint>
#include <span>

#include "graphspn/spn/spn.hpp"

namespace graphspn::learn {

struct StructureParams {
  int num_decompositions_per_scope = 2;
  int num_subsets_per_decomposition = 2;
  int num_sums_per_subscope = 4;
  std::uint64_t rng_seed = 0;
};

void check(const StructureParams& params);

/// Dense random structure: every scope with more than one variable is split
/// num_decompositions_per_scope times into random subsets; each subset gets
/// num_sums_per_subscope sums, products take one sum from every subset (all
/// combinations), and the scope's sums mix all of those products. Singleton
/// scopes end in sums over the variable's indicators. Identical sub-scopes
/// share their sums, so the result is a DAG. All weights start uniform.
spn::Spn generate_dense_structure(std::span<const spn::CategoricalVariable> variables,
                                  const StructureParams& params);

}  // namespace graphspn::learn
