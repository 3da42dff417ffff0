#pragma once

// Random complete + decomposable SPNs for property tests.

#include <map>
#include <random>
#include <vector>

#include "graphspn/spn/spn.hpp"

namespace graphspn::testing {

class RandomSpnFactory {
 public:
  RandomSpnFactory(std::uint64_t seed, std::size_t num_vars, std::uint32_t cardinality)
      : rng_(seed), builder_(spn::make_variables(num_vars, cardinality)), num_vars_(num_vars), card_(cardinality) {}

  spn::Spn make(bool normalized) && {
    normalized_ = normalized;
    std::vector<std::uint32_t> all(num_vars_);
    for (std::uint32_t i = 0; i < num_vars_; ++i) all[i] = i;
    const auto root = build(all, 0, true);
    return std::move(builder_).build(root);
  }

 private:
  double coin() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::vector<double> weights(std::size_t n) {
    std::vector<double> w(n);
    double z = 0.0;
    for (auto& x : w) z += (x = 0.05 + 2.0 * coin());
    if (normalized_) {
      for (auto& x : w) x /= z;
    }
    return w;
  }

  spn::NodeId build(const std::vector<std::uint32_t>& scope, int depth, bool is_root) {
    if (!is_root && coin() < 0.3) {
      if (auto it = shared_.find(scope); it != shared_.end()) return it->second;
    }
    spn::NodeId id;
    if (scope.size() == 1) {
      const auto var = spn::VariableId{scope[0]};
      if (!is_root && coin() < 0.15) {
        id = builder_.add_indicator(var, static_cast<std::uint32_t>(pick(card_)));
      } else {
        std::vector<spn::NodeId> kids;
        for (std::uint32_t k = 0; k < card_; ++k) {
          if (k == 0 || coin() < 0.85) kids.push_back(builder_.add_indicator(var, k));
        }
        id = builder_.add_sum(kids, weights(kids.size()));
      }
    } else if (depth < 3 && (is_root || coin() < 0.5)) {
      const std::size_t n = 2 + pick(2);
      std::vector<spn::NodeId> kids;
      for (std::size_t i = 0; i < n; ++i) kids.push_back(build_product(scope, depth + 1));
      id = builder_.add_sum(kids, weights(n));
    } else {
      id = build_product(scope, depth + 1);
    }
    shared_[scope] = id;
    return id;
  }

  spn::NodeId build_product(const std::vector<std::uint32_t>& scope, int depth) {
    auto s = scope;
    std::shuffle(s.begin(), s.end(), rng_);
    const std::size_t parts = std::min<std::size_t>(s.size(), 2 + pick(2));
    std::vector<std::vector<std::uint32_t>> split(parts);
    for (std::size_t i = 0; i < s.size(); ++i) split[i < parts ? i : pick(parts)].push_back(s[i]);
    std::vector<spn::NodeId> kids;
    for (auto& part : split) {
      std::sort(part.begin(), part.end());
      kids.push_back(build(part, depth, false));
    }
    return builder_.add_product(kids);
  }

  std::mt19937_64 rng_;
  spn::SpnBuilder builder_;
  std::size_t num_vars_;
  std::uint32_t card_;
  bool normalized_ = true;
  std::map<std::vector<std::uint32_t>, spn::NodeId> shared_;
};

inline spn::Spn random_spn(std::uint64_t seed, std::size_t num_vars, std::uint32_t cardinality,
                           bool normalized = true) {
  return RandomSpnFactory(seed, num_vars, cardinality).make(normalized);
}

}  // namespace graphspn::testing
