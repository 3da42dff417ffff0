#include "graphspn/learn/hard_em.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/logmath.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/spn/inference.hpp"

namespace graphspn::learn {

using spn::NodeId;

void check(const TrainConfig& config) {
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(config.rel_loglik_tolerance > 0.0)) throw ConfigError("rel_loglik_tolerance must be > 0");
  if (!(config.count_smoothing >= 0.0)) throw ConfigError("count_smoothing must be >= 0");
  if (!(config.prune_epsilon >= 0.0)) throw ConfigError("prune_epsilon must be >= 0");
  if (!(config.leaf_peak >= 0.0 && config.leaf_peak <= 1.0)) throw ConfigError("leaf_peak must be in [0, 1]");
}

namespace {

void fill_observed(const spn::Spn& spn, const Sample& sample, spn::LeafTable& leaves) {
  if (sample.size() != spn.num_variables()) {
    throw SpnError("sample has " + std::to_string(sample.size()) + " values, SPN has " +
                   std::to_string(spn.num_variables()) + " variables");
  }
  leaves.log_values.resize(spn.num_variables());
  for (std::size_t v = 0; v < sample.size(); ++v) {
    const std::uint32_t card = spn.variables()[v].cardinality;
    if (sample[v] >= card) throw SpnError("sample value out of range for variable " + std::to_string(v));
    auto& row = leaves.log_values[v];
    row.assign(card, kLogZero);
    row[sample[v]] = 0.0;
  }
}

}  // namespace

double hard_em_epoch(spn::Spn& spn, std::span<const Sample> data, double count_smoothing,
                     const spn::TraceOptions& options) {
  if (!spn.is_valid()) throw SpnError("hard EM requires a valid SPN");
  if (data.empty()) throw SpnError("hard EM requires a non-empty dataset");

  std::vector<std::vector<double>> counts(spn.size());
  for (NodeId id = 0; id < spn.size(); ++id) {
    if (const auto* sum = std::get_if<spn::SumNode>(&spn.node(id))) counts[id].assign(sum->children.size(), 0.0);
  }

  spn::LeafTable leaves;
  std::vector<double> sum_values;
  std::vector<double> max_values;
  std::vector<NodeId> stack;
  spn::MaxTrace trace;
  double total = 0.0;
  for (const Sample& sample : data) {
    fill_observed(spn, sample, leaves);
    spn::upward_pass(spn, leaves, spn::PassMode::kSum, sum_values);
    total += sum_values[spn.root()];
    spn::upward_pass(spn, leaves, spn::PassMode::kMax, max_values);
    spn::trace_max(spn, max_values, trace, stack, options);
    for (const auto& [sum, child] : trace.sum_choices) counts[sum][child] += 1.0;
  }

  for (NodeId id = 0; id < spn.size(); ++id) {
    auto& c = counts[id];
    if (c.empty()) continue;
    double z = 0.0;
    for (double& x : c) {
      x += count_smoothing;
      z += x;
    }
    if (!(z > 0.0)) continue;
    for (double& x : c) x /= z;
    spn.set_weights(id, c);
  }
  return total;
}

void init_leaf_weights(spn::Spn& spn, std::span<const Sample> data, double peak) {
  const std::size_t nv = spn.num_variables();
  std::vector<std::vector<std::size_t>> counts(nv);
  for (std::size_t v = 0; v < nv; ++v) counts[v].assign(spn.variables()[v].cardinality, 0);
  for (const Sample& sample : data) {
    if (sample.size() != nv) throw SpnError("sample size differs from the SPN variable count");
    for (std::size_t v = 0; v < nv; ++v) {
      if (sample[v] >= counts[v].size()) throw SpnError("sample value out of range for variable " + std::to_string(v));
      ++counts[v][sample[v]];
    }
  }
  std::vector<std::vector<std::uint32_t>> ranked(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    auto& r = ranked[v];
    for (std::uint32_t k = 0; k < counts[v].size(); ++k) {
      if (counts[v][k] > 0) r.push_back(k);
    }
    if (r.empty()) {
      for (std::uint32_t k = 0; k < counts[v].size(); ++k) r.push_back(k);
    }
    std::stable_sort(r.begin(), r.end(), [&](std::uint32_t a, std::uint32_t b) { return counts[v][a] > counts[v][b]; });
  }

  std::vector<std::size_t> next(nv, 0);
  std::vector<double> w;
  for (NodeId id = 0; id < spn.size(); ++id) {
    const auto* sum = std::get_if<spn::SumNode>(&spn.node(id));
    if (!sum) continue;
    const auto* first = std::get_if<spn::IndicatorNode>(&spn.node(sum->children.front()));
    if (!first) continue;
    bool leaf = true;
    for (NodeId c : sum->children) {
      const auto* ind = std::get_if<spn::IndicatorNode>(&spn.node(c));
      leaf = leaf && ind && ind->var == first->var;
    }
    if (!leaf) continue;
    const std::uint32_t v = first->var.value;
    const std::uint32_t target = ranked[v][next[v]++ % ranked[v].size()];
    const double base = (1.0 - peak) / static_cast<double>(sum->children.size());
    w.assign(sum->children.size(), base);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (std::get<spn::IndicatorNode>(spn.node(sum->children[j])).value == target) w[j] += peak;
    }
    spn.set_weights(id, w);
  }
}

TrainResult train(spn::Spn spn, std::span<const Sample> data, const TrainConfig& config) {
  check(config);
  Rng rng = make_rng(config.rng_seed);
  const spn::TraceOptions options{&rng, config.unweighted_selection};
  TrainResult result{spn::normalize_weights(spn), {}};
  if (config.leaf_init == LeafInit::kFrequency) {
    init_leaf_weights(result.spn, data, config.leaf_peak);
    result.spn = spn::normalize_weights(result.spn);
  }
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const double ll = hard_em_epoch(result.spn, data, config.count_smoothing, options);
    result.trace.push_back(ll);
    if (epoch == 0) continue;
    const double prev = result.trace[result.trace.size() - 2];
    if (!std::isfinite(prev) || !std::isfinite(ll)) continue;
    const double rel = std::abs(ll - prev) / std::max(std::abs(prev), 1e-300);
    if (rel < config.rel_loglik_tolerance) break;
  }
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "epoch,loglik\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, trace[i]);
    out << buf;
  }
}

}  // namespace graphspn::learn
