#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphspn/common/rng.hpp"
#include "graphspn/spn/evidence.hpp"
#include "graphspn/spn/spn.hpp"

namespace graphspn::spn {

// Caller-owned scratch space. Reusing one per thread avoids reallocating the
// per-node value arrays on every call; the network itself is never written.
struct Workspace {
  std::vector<double> values;
  std::vector<double> derivatives;
  std::vector<NodeId> stack;
};

enum class PassMode { kSum, kMax };

/// Bottom-up log-space pass; fills values[node] for every node.
void upward_pass(const Spn& spn, const LeafTable& leaves, PassMode mode,
                 std::vector<double>& values);

/// Selections made by the top-down max traversal of an upward kMax pass.
struct MaxTrace {
  std::vector<std::pair<NodeId, std::uint32_t>> sum_choices;  // (sum node, child index)
  std::vector<NodeId> leaves;
};

/// Walks the max-induced tree from the root: the highest-valued child of each
/// sum and every child of each product. Ties go to the lowest index, or to a
/// uniformly drawn tied child when tie_rng is given. With unweighted set a sum
/// compares its children's values without its own weights.
struct TraceOptions {
  Rng* tie_rng = nullptr;
  bool unweighted = false;
};
void trace_max(const Spn& spn, std::span<const double> max_values, MaxTrace& trace,
               std::vector<NodeId>& stack, const TraceOptions& options = {});

double eval_log(const Spn& spn, const Evidence& evidence);
double eval_log(const Spn& spn, const Evidence& evidence, Workspace& ws);

/// Posterior over the values of each variable given the evidence.
std::vector<std::vector<double>> marginals(const Spn& spn, const Evidence& evidence);
std::vector<std::vector<double>> marginals(const Spn& spn, const Evidence& evidence, Workspace& ws);

struct MpeResult {
  std::vector<std::uint32_t> assignment;
  double log_value = 0.0;  // log of the max-product network value
};

MpeResult mpe(const Spn& spn, const Evidence& evidence);
MpeResult mpe(const Spn& spn, const Evidence& evidence, Workspace& ws);

}  // namespace graphspn::spn
