#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "graphspn/common/errors.hpp"
#include "graphspn/learn/config_io.hpp"
#include "graphspn/learn/hard_em.hpp"
#include "graphspn/learn/prune.hpp"
#include "graphspn/learn/structure.hpp"
#include "graphspn/spn/inference.hpp"
#include "../support/spn_oracle.hpp"

namespace graphspn::learn {
namespace {

using spn::Evidence;
using spn::Spn;
using testing::all_assignments;
using testing::cardinalities;

double total_mass(const Spn& net) {
  double total = 0.0;
  for (const auto& x : all_assignments(cardinalities(net))) total += std::exp(spn::eval_log(net, Evidence::observed(x)));
  return total;
}

Spn single_sum(std::vector<double> weights) {
  spn::SpnBuilder b(spn::make_variables(1, static_cast<std::uint32_t>(weights.size())));
  std::vector<spn::NodeId> kids;
  for (std::uint32_t k = 0; k < weights.size(); ++k) kids.push_back(b.add_indicator(spn::VariableId{0}, k));
  const auto s = b.add_sum(kids, weights);
  return std::move(b).build(s);
}

const std::vector<double>& root_weights(const Spn& net) { return std::get<spn::SumNode>(net.node(net.root())).weights; }

// Fixed ground truth: 3-component mixture over two binary variables.
std::vector<double> mixture_joint() {
  const double prior[3] = {0.5, 0.3, 0.2};
  const double p0[3] = {0.9, 0.2, 0.5};
  const double p1[3] = {0.8, 0.1, 0.3};
  std::vector<double> joint(4, 0.0);
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        joint[a + 2 * b] += prior[c] * (a == 0 ? p0[c] : 1 - p0[c]) * (b == 0 ? p1[c] : 1 - p1[c]);
      }
    }
  }
  return joint;
}

std::vector<Sample> sample_joint(const std::vector<double>& joint, const std::vector<std::uint32_t>& cards,
                                 std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(joint.begin(), joint.end());
  const auto xs = all_assignments(cards);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(xs[pick(rng)]);
  return out;
}

TEST(DenseStructure, SingleVariableIsSumOverIndicators) {
  const auto vars = spn::make_variables(1, 7);
  const Spn net = generate_dense_structure(vars, {});
  const auto& root = std::get<spn::SumNode>(net.node(net.root()));
  EXPECT_EQ(root.children.size(), 7u);
  for (auto c : root.children) EXPECT_TRUE(std::holds_alternative<spn::IndicatorNode>(net.node(c)));
  EXPECT_EQ(net.size(), 8u);
}

TEST(DenseStructure, TwoBinaryVariablesDefaults) {
  const auto vars = spn::make_variables(2, 2);
  const Spn net = generate_dense_structure(vars, {});
  EXPECT_TRUE(net.is_valid());
  EXPECT_EQ(net.scope(net.root()).size(), 2u);
}

TEST(DenseStructure, FourTernaryVariablesNormalizeToUnitMass) {
  const auto vars = spn::make_variables(4, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StructureParams p;
    p.rng_seed = seed;
    const Spn net = generate_dense_structure(vars, p);
    ASSERT_TRUE(net.is_valid()) << seed;
    EXPECT_NEAR(total_mass(spn::normalize_weights(net)), 1.0, 1e-9);
  }
}

TEST(DenseStructure, ValidForRandomVariableSetsAndSeeds) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto n = 1 + rng() % 6;
    std::vector<spn::CategoricalVariable> vars;
    for (std::uint32_t v = 0; v < n; ++v) vars.push_back({spn::VariableId{v}, static_cast<std::uint32_t>(2 + rng() % 9)});
    StructureParams p;
    p.rng_seed = rng();
    p.num_decompositions_per_scope = 1 + static_cast<int>(rng() % 3);
    p.num_subsets_per_decomposition = 2 + static_cast<int>(rng() % 2);
    p.num_sums_per_subscope = 1 + static_cast<int>(rng() % 3);
    const Spn net = generate_dense_structure(vars, p);
    EXPECT_TRUE(net.is_valid());
    EXPECT_EQ(net.scope(net.root()).size(), n);
  }
}

TEST(DenseStructure, DeterministicPerSeedAndRejectsEmpty) {
  const auto vars = spn::make_variables(5, 4);
  StructureParams p;
  p.rng_seed = 99;
  const Spn a = generate_dense_structure(vars, p);
  const Spn b = generate_dense_structure(vars, p);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.num_edges(), b.num_edges());
  EXPECT_THROW(generate_dense_structure({}, p), SpnError);
  p.num_subsets_per_decomposition = 1;
  EXPECT_THROW(generate_dense_structure(vars, p), ConfigError);
}

TEST(HardEm, CountRatioWithoutSmoothing) {
  Spn net = single_sum({0.5, 0.5});
  std::vector<Sample> data(7, Sample{0});
  data.insert(data.end(), 3, Sample{1});
  hard_em_epoch(net, data, 0.0);
  EXPECT_DOUBLE_EQ(root_weights(net)[0], 0.7);
  EXPECT_DOUBLE_EQ(root_weights(net)[1], 0.3);
}

TEST(HardEm, SmoothingKeepsUnseenValuePositive) {
  Spn net = single_sum({0.5, 0.5});
  const std::vector<Sample> data(10, Sample{0});
  const double ll = hard_em_epoch(net, data, 0.1);
  EXPECT_NEAR(ll, 10 * std::log(0.5), 1e-12);
  EXPECT_DOUBLE_EQ(root_weights(net)[0], 10.1 / 10.2);
  EXPECT_DOUBLE_EQ(root_weights(net)[1], 0.1 / 10.2);
}

TEST(HardEm, WeightsStayNormalizedAndPositive) {
  const auto vars = spn::make_variables(3, 4);
  Spn net = generate_dense_structure(vars, {});
  const auto data = sample_joint(std::vector<double>(64, 1.0 / 64), cardinalities(net), 50, 3);
  for (int epoch = 0; epoch < 3; ++epoch) {
    hard_em_epoch(net, data, 0.1);
    for (const auto& node : net.nodes()) {
      if (const auto* s = std::get_if<spn::SumNode>(&node)) {
        double z = 0.0;
        for (double w : s->weights) {
          EXPECT_GT(w, 0.0);
          z += w;
        }
        EXPECT_NEAR(z, 1.0, 1e-12);
      }
    }
  }
}

TEST(HardEm, RejectsBadSamples) {
  Spn net = single_sum({0.5, 0.5});
  EXPECT_THROW(hard_em_epoch(net, std::vector<Sample>{{0, 1}}, 0.1), SpnError);
  EXPECT_THROW(hard_em_epoch(net, std::vector<Sample>{{2}}, 0.1), SpnError);
  EXPECT_THROW(hard_em_epoch(net, std::vector<Sample>{}, 0.1), SpnError);
}

TEST(Train, RecoversMixtureJoint) {
  const auto joint = mixture_joint();
  const auto vars = spn::make_variables(2, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = sample_joint(joint, {2, 2}, 2000, 17 + seed);
    StructureParams sp;
    sp.rng_seed = seed;
    TrainConfig tc;
    tc.rng_seed = seed;
    const auto result = train(generate_dense_structure(vars, sp), data, tc);
    EXPECT_TRUE(result.spn.is_valid());
    double tv = 0.0;
    const auto xs = all_assignments({2, 2});
    for (std::size_t i = 0; i < xs.size(); ++i) {
      tv += std::abs(std::exp(spn::eval_log(result.spn, Evidence::observed(xs[i]))) - joint[i]);
    }
    EXPECT_LT(0.5 * tv, 0.1) << "seed " << seed;
    EXPECT_NEAR(total_mass(result.spn), 1.0, 1e-9);
  }
}

TEST(Train, RepeatedSampleBecomesMode) {
  const auto vars = spn::make_variables(3, 3);
  const std::vector<Sample> data(20, Sample{2, 0, 1});
  const auto result = train(generate_dense_structure(vars, {}), data, {});
  const double target = spn::eval_log(result.spn, Evidence::observed({2, 0, 1}));
  for (const auto& x : all_assignments({3, 3, 3})) {
    if (x == Sample{2, 0, 1}) continue;
    EXPECT_LT(spn::eval_log(result.spn, Evidence::observed(x)), target);
  }
}

TEST(Train, TraceBoundedByMaxEpochs) {
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.rel_loglik_tolerance = 1e-300;
  const auto data = sample_joint(mixture_joint(), {2, 2}, 100, 1);
  const auto result = train(generate_dense_structure(spn::make_variables(2, 2), {}), data, cfg);
  EXPECT_EQ(result.trace.size(), 3u);
  std::ostringstream csv;
  write_trace_csv(csv, result.trace);
  EXPECT_EQ(csv.str().rfind("epoch,loglik\n1,", 0), 0u);
}

TEST(Train, BeatsUniformOnHeldOutData) {
  // Toy task: 4 ternary variables, ground truth a random 2-component mixture.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<std::vector<double>> comp(8, std::vector<double>(3));
    for (auto& row : comp) {
      double z = 0;
      for (auto& x : row) z += (x = u(rng) * u(rng));
      for (auto& x : row) x /= z;
    }
    const auto xs = all_assignments({3, 3, 3, 3});
    std::vector<double> joint(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (int c = 0; c < 2; ++c) {
        double p = 0.5;
        for (int v = 0; v < 4; ++v) p *= comp[c * 4 + v][xs[i][v]];
        joint[i] += p;
      }
    }
    const auto train_data = sample_joint(joint, {3, 3, 3, 3}, 400, seed + 100);
    const auto test_data = sample_joint(joint, {3, 3, 3, 3}, 400, seed + 200);
    StructureParams sp;
    sp.rng_seed = seed;
    const Spn untrained = generate_dense_structure(spn::make_variables(4, 3), sp);
    const auto trained = train(untrained, train_data, {});
    double ll_trained = 0.0, ll_uniform = 0.0;
    for (const auto& x : test_data) {
      ll_trained += spn::eval_log(trained.spn, Evidence::observed(x));
      ll_uniform += spn::eval_log(untrained, Evidence::observed(x));
    }
    EXPECT_GT(ll_trained, ll_uniform) << "seed " << seed;
  }
}

TEST(Train, BitwiseDeterministic) {
  const auto data = sample_joint(mixture_joint(), {2, 2}, 300, 5);
  StructureParams sp;
  sp.rng_seed = 4;
  const auto a = train(generate_dense_structure(spn::make_variables(2, 2), sp), data, {});
  const auto b = train(generate_dense_structure(spn::make_variables(2, 2), sp), data, {});
  ASSERT_EQ(a.spn.size(), b.spn.size());
  for (spn::NodeId id = 0; id < a.spn.size(); ++id) {
    if (const auto* s = std::get_if<spn::SumNode>(&a.spn.node(id))) {
      EXPECT_EQ(s->weights, std::get<spn::SumNode>(b.spn.node(id)).weights);
    }
  }
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Prune, ZeroEpsilonKeepsEverythingReachable) {
  const auto vars = spn::make_variables(3, 3);
  const Spn net = spn::normalize_weights(generate_dense_structure(vars, {}));
  const Spn pruned = prune(net, 0.0);
  EXPECT_EQ(pruned.size(), net.size());
  EXPECT_EQ(pruned.num_edges(), net.num_edges());
}

TEST(Prune, DropsTinyEdge) {
  const Spn pruned = prune(single_sum({0.99, 0.00001}), 1e-4);
  EXPECT_EQ(root_weights(pruned), std::vector<double>{1.0});
  EXPECT_EQ(pruned.size(), 2u);
  // All children below epsilon: the heaviest survives.
  const Spn kept = prune(single_sum({1e-6, 3e-6, 2e-6}), 1e-4);
  ASSERT_EQ(root_weights(kept).size(), 1u);
  EXPECT_EQ(std::get<spn::IndicatorNode>(kept.node(std::get<spn::SumNode>(kept.node(kept.root())).children[0])).value, 1u);
}

TEST(Prune, TrainedModelChangesLittle) {
  // Per assignment the change can exceed 0.01 for rare states whose only
  // support was a smoothing-weight edge; the distribution as a whole moves
  // very little.
  const auto xs = all_assignments({3, 3, 3, 3});
  std::vector<double> joint(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) joint[i] = 1.0 + (xs[i][0] == xs[i][1]) * 20.0 + (xs[i][2] == 0) * 5.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = sample_joint(joint, {3, 3, 3, 3}, 3000, 9 + seed);
    StructureParams sp;
    sp.rng_seed = seed;
    TrainConfig tc;
    tc.rng_seed = seed;
    const auto trained = train(generate_dense_structure(spn::make_variables(4, 3), sp), data, tc);
    const Spn pruned = prune(trained.spn, 1e-4);
    EXPECT_TRUE(pruned.is_valid());
    EXPECT_LT(pruned.num_edges(), trained.spn.num_edges());
    double tv = 0.0;
    for (const auto& x : xs) {
      tv += std::abs(std::exp(spn::eval_log(trained.spn, Evidence::observed(x))) -
                     std::exp(spn::eval_log(pruned, Evidence::observed(x))));
    }
    EXPECT_LT(0.5 * tv, 0.01) << "seed " << seed;
    std::mt19937_64 rng(seed);
    std::vector<double> diffs;
    for (int i = 0; i < 100; ++i) {
      const auto& x = xs[rng() % xs.size()];
      diffs.push_back(std::abs(spn::eval_log(trained.spn, Evidence::observed(x)) - spn::eval_log(pruned, Evidence::observed(x))));
    }
    std::nth_element(diffs.begin(), diffs.begin() + 50, diffs.end());
    EXPECT_LT(diffs[50], 0.01) << "seed " << seed;
  }
}

TEST(LeafInit, PeaksCycleThroughValuesByFrequency) {
  // Variable 0 sees value 2 three times, value 0 once; value 1 never.
  const std::vector<Sample> data = {{2, 1}, {2, 1}, {2, 0}, {0, 0}};
  StructureParams sp;
  sp.num_sums_per_subscope = 3;
  Spn net = generate_dense_structure(spn::make_variables(2, 3), sp);
  init_leaf_weights(net, data, 0.6);
  std::vector<std::vector<std::uint32_t>> peaks(2);
  for (spn::NodeId id = 0; id < net.size(); ++id) {
    const auto* sum = std::get_if<spn::SumNode>(&net.node(id));
    if (!sum || !std::holds_alternative<spn::IndicatorNode>(net.node(sum->children[0]))) continue;
    const auto var = std::get<spn::IndicatorNode>(net.node(sum->children[0])).var.value;
    double total = 0.0;
    std::size_t best = 0;
    for (std::size_t j = 0; j < sum->weights.size(); ++j) {
      total += sum->weights[j];
      if (sum->weights[j] > sum->weights[best]) best = j;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(sum->weights[best], 0.6 + 0.4 / 3, 1e-12);
    peaks[var].push_back(std::get<spn::IndicatorNode>(net.node(sum->children[best])).value);
  }
  EXPECT_EQ(peaks[0], (std::vector<std::uint32_t>{2, 0, 2}));
  // Ties keep value order.
  EXPECT_EQ(peaks[1], (std::vector<std::uint32_t>{0, 1, 0}));
}

TEST(LeafInit, FrequencyInitTrainsValidDeterministicModels) {
  const auto data = sample_joint(mixture_joint(), {2, 2}, 300, 8);
  TrainConfig cfg;
  cfg.leaf_init = LeafInit::kFrequency;
  const auto a = train(generate_dense_structure(spn::make_variables(2, 2), {}), data, cfg);
  const auto b = train(generate_dense_structure(spn::make_variables(2, 2), {}), data, cfg);
  EXPECT_TRUE(a.spn.is_valid());
  EXPECT_NEAR(total_mass(a.spn), 1.0, 1e-9);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_THROW(
      {
        cfg.leaf_peak = 1.5;
        train(generate_dense_structure(spn::make_variables(2, 2), {}), data, cfg);
      },
      ConfigError);
}

TEST(ConfigIo, ReadsDefaultsAndRejectsUnknownKeys) {
  const auto sp = structure_params_from_json(nlohmann::json::parse(R"({"num_sums_per_subscope": 3, "rng_seed": 7})"));
  EXPECT_EQ(sp.num_sums_per_subscope, 3);
  EXPECT_EQ(sp.num_decompositions_per_scope, 2);
  EXPECT_EQ(sp.rng_seed, 7u);
  const auto tc = train_config_from_json(nlohmann::json::parse(R"({"max_epochs": 5})"));
  EXPECT_EQ(tc.max_epochs, 5);
  EXPECT_DOUBLE_EQ(tc.count_smoothing, 0.1);
  EXPECT_THROW(train_config_from_json(nlohmann::json::parse(R"({"epochs": 5})")), ConfigError);
  EXPECT_THROW(train_config_from_json(nlohmann::json::parse(R"({"rel_loglik_tolerance": 0})")), ConfigError);
  EXPECT_EQ(train_config_from_json(to_json(tc)).max_epochs, 5);
  EXPECT_EQ(tc.leaf_init, LeafInit::kUniform);
  const auto freq = train_config_from_json(nlohmann::json::parse(R"({"leaf_init": "frequency", "leaf_peak": 0.8})"));
  EXPECT_EQ(freq.leaf_init, LeafInit::kFrequency);
  EXPECT_EQ(train_config_from_json(to_json(freq)).leaf_init, LeafInit::kFrequency);
  EXPECT_THROW(train_config_from_json(nlohmann::json::parse(R"({"leaf_init": "random"})")), ConfigError);
}

}  // namespace
}  // namespace graphspn::learn
