#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "graphspn/common/rng.hpp"
#include "graphspn/mrf/factor_graph.hpp"

namespace graphspn::mrf {

struct BpConfig {
  int max_iterations = 200;
  double damping = 0.5;
  double tolerance = 1e-6;  // on the largest change of any message entry
  std::uint64_t rng_seed = 0;
};

void check(const BpConfig& config);
BpConfig bp_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const BpConfig& config);

struct BpResult {
  std::vector<std::vector<double>> marginals;
  bool converged = false;
  int iterations = 0;
  double last_change = 0.0;
};

// Sum-product loopy belief propagation. Each iteration visits the factors in
// a fresh random order and updates all of a factor's outgoing messages from
// the current variable-to-factor messages. Messages are kept normalized in
// linear space; updates are damped as m = (1 - damping) m_new + damping m_old.
class LoopyBp {
 public:
  LoopyBp(const FactorGraph& fg, const BpConfig& config);

  // One sweep over all factors; returns the largest message change.
  double iterate();

  // messages()[f][i] is the message from factor f to its i-th variable.
  const std::vector<std::vector<std::vector<double>>>& messages() const { return messages_; }
  std::vector<std::vector<double>> beliefs() const;

 private:
  std::vector<double> variable_to_factor(std::size_t f, std::size_t slot) const;

  const FactorGraph& fg_;
  BpConfig config_;
  Rng rng_;
  std::vector<std::vector<std::vector<double>>> messages_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incoming_;  // per variable: (factor, slot)
  std::vector<std::size_t> order_;
};

BpResult loopy_bp(const FactorGraph& fg, const BpConfig& config);

// Brute-force marginals of the normalized factor product. Throws DataError
// when the joint state space exceeds 10^7 or the product is zero everywhere.
std::vector<std::vector<double>> exact_marginals(const FactorGraph& fg);

}  // namespace graphspn::mrf
