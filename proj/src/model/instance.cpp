#include "graphspn/model/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/logmath.hpp"
#include "graphspn/templates/decompose.hpp"

namespace graphspn::model {

using templates::Decomposition;

void check(const InstantiationConfig& config) {
  if (config.num_decompositions < 1) throw ConfigError("num_decompositions must be >= 1");
  if (!config.root_weights.empty()) {
    if (config.root_weights.size() != static_cast<std::size_t>(config.num_decompositions)) {
      throw ConfigError("root_weights needs one entry per decomposition");
    }
    double total = 0.0;
    for (double w : config.root_weights) {
      if (!std::isfinite(w) || w < 0.0) throw ConfigError("root_weights must be finite and >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw ConfigError("root_weights must not all be zero");
  }
}

InstantiationConfig instantiation_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("instantiation config must be a JSON object");
  InstantiationConfig c;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "num_decompositions") {
        c.num_decompositions = value.get<int>();
      } else if (key == "rng_seed") {
        c.rng_seed = value.get<std::uint64_t>();
      } else if (key == "root_weights") {
        if (value.is_string()) {
          if (value.get<std::string>() != "uniform") throw ConfigError("root_weights must be \"uniform\" or a list");
        } else {
          c.root_weights = value.get<std::vector<double>>();
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in instantiation config");
      }
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("bad value for '" + key + "'");
    }
  }
  check(c);
  return c;
}

nlohmann::json to_json(const InstantiationConfig& c) {
  nlohmann::json doc = {{"num_decompositions", c.num_decompositions}, {"rng_seed", c.rng_seed}};
  doc["root_weights"] = c.root_weights.empty() ? nlohmann::json("uniform") : nlohmann::json(c.root_weights);
  return doc;
}

InstanceSpn::InstanceSpn(const GraphSpnModel& model, const graph::TopoGraph& graph,
                         std::vector<Decomposition> decompositions, std::vector<double> root_weights)
    : num_variables_(graph.nodes.size()),
      cardinality_(model.num_categories),
      decompositions_(std::move(decompositions)) {
  if (decompositions_.empty()) throw SpnError("instance needs at least one decomposition");
  std::unordered_map<graph::NodeId, std::size_t> position;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) position.emplace(graph.nodes[i].id, i);

  for (const auto& d : decompositions_) {
    std::vector<Binding> product;
    std::vector<int> bound(num_variables_, 0);
    for (const auto& c : d.components) {
      const auto& t = model.at(c.template_id);
      if (t.spn->num_variables() != c.node_ids.size()) {
        throw SpnError("component of '" + c.template_id + "' has the wrong number of nodes");
      }
      Binding b{c.template_id, t.spn, {}};
      for (graph::NodeId id : c.node_ids) {
        const auto it = position.find(id);
        if (it == position.end()) throw DataError("component references unknown node " + std::to_string(id));
        b.variables.push_back(it->second);
        ++bound[it->second];
      }
      product.push_back(std::move(b));
    }
    for (std::size_t v = 0; v < num_variables_; ++v) {
      if (bound[v] != 1) throw SpnError("decomposition does not bind node position " + std::to_string(v) + " exactly once");
    }
    products_.push_back(std::move(product));
  }

  if (root_weights.empty()) root_weights.assign(products_.size(), 1.0);
  if (root_weights.size() != products_.size()) throw SpnError("root weight count differs from decomposition count");
  double total = 0.0;
  for (double w : root_weights) total += w;
  if (!(total > 0.0)) throw SpnError("root weights must not all be zero");
  for (double& w : root_weights) w /= total;
  root_weights_ = std::move(root_weights);
}

spn::Evidence InstanceSpn::sub_evidence(const spn::Evidence& evidence, const Binding& b) const {
  spn::Evidence sub(b.variables.size());
  for (std::size_t i = 0; i < b.variables.size(); ++i) sub.set(i, evidence[b.variables[i]]);
  return sub;
}

std::vector<std::vector<double>> InstanceSpn::component_log_values(const spn::Evidence& evidence) const {
  if (evidence.size() != num_variables_) throw SpnError("evidence size differs from the instance's variable count");
  // The same component often recurs across decompositions; evaluate it once.
  std::map<std::pair<const spn::Spn*, std::vector<std::size_t>>, double> cache;
  spn::Workspace ws;
  std::vector<std::vector<double>> out;
  for (const auto& product : products_) {
    std::vector<double> row;
    for (const auto& b : product) {
      const auto key = std::make_pair(b.spn.get(), b.variables);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, spn::eval_log(*b.spn, sub_evidence(evidence, b), ws)).first;
      row.push_back(it->second);
    }
    out.push_back(std::move(row));
  }
  return out;
}

double InstanceSpn::eval_log(const spn::Evidence& evidence) const {
  const auto values = component_log_values(evidence);
  std::vector<double> terms;
  for (std::size_t d = 0; d < values.size(); ++d) {
    double acc = safe_log(root_weights_[d]);
    for (double v : values[d]) acc += v;
    terms.push_back(acc);
  }
  return log_sum_exp(terms);
}

std::vector<std::vector<double>> InstanceSpn::marginals(const spn::Evidence& evidence) const {
  const auto values = component_log_values(evidence);
  std::vector<double> log_joint(values.size());
  for (std::size_t d = 0; d < values.size(); ++d) {
    double acc = safe_log(root_weights_[d]);
    for (double v : values[d]) acc += v;
    log_joint[d] = acc;
  }
  const double total = log_sum_exp(log_joint);
  if (total == kLogZero) throw SpnError("evidence has zero likelihood");

  std::vector<std::vector<double>> out(num_variables_, std::vector<double>(cardinality_, 0.0));
  std::map<std::pair<const spn::Spn*, std::vector<std::size_t>>, std::vector<std::vector<double>>> cache;
  spn::Workspace ws;
  for (std::size_t d = 0; d < products_.size(); ++d) {
    if (log_joint[d] == kLogZero) continue;
    const double r = std::exp(log_joint[d] - total);
    for (const auto& b : products_[d]) {
      const auto key = std::make_pair(b.spn.get(), b.variables);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, spn::marginals(*b.spn, sub_evidence(evidence, b), ws)).first;
      for (std::size_t i = 0; i < b.variables.size(); ++i) {
        auto& dst = out[b.variables[i]];
        for (std::size_t k = 0; k < cardinality_; ++k) dst[k] += r * it->second[i][k];
      }
    }
  }
  for (auto& row : out) {
    double z = 0.0;
    for (double x : row) z += x;
    for (double& x : row) x /= z;
  }
  return out;
}

spn::MpeResult InstanceSpn::mpe(const spn::Evidence& evidence) const {
  const auto values = component_log_values(evidence);
  spn::MpeResult best;
  best.log_value = kLogZero;
  bool found = false;
  spn::Workspace ws;
  for (std::size_t d = 0; d < products_.size(); ++d) {
    if (root_weights_[d] <= 0.0) continue;
    bool supported = true;
    for (double v : values[d]) supported = supported && v != kLogZero;
    if (!supported) continue;
    spn::MpeResult candidate;
    candidate.assignment.assign(num_variables_, 0);
    candidate.log_value = std::log(root_weights_[d]);
    for (const auto& b : products_[d]) {
      const auto part = spn::mpe(*b.spn, sub_evidence(evidence, b), ws);
      candidate.log_value += part.log_value;
      for (std::size_t i = 0; i < b.variables.size(); ++i) candidate.assignment[b.variables[i]] = part.assignment[i];
    }
    if (!found || candidate.log_value > best.log_value) {
      best = std::move(candidate);
      found = true;
    }
  }
  if (!found) throw SpnError("evidence has zero likelihood");
  return best;
}

spn::Spn InstanceSpn::materialize() const {
  spn::SpnBuilder builder(spn::make_variables(num_variables_, cardinality_));
  std::map<std::pair<std::size_t, std::uint32_t>, spn::NodeId> indicators;
  std::vector<spn::NodeId> roots;
  for (const auto& product : products_) {
    std::vector<spn::NodeId> children;
    for (const auto& b : product) {
      const spn::Spn& t = *b.spn;
      std::vector<spn::NodeId> copy(t.size(), 0);
      for (spn::NodeId id : t.topological_order()) {
        const auto& node = t.node(id);
        if (const auto* ind = std::get_if<spn::IndicatorNode>(&node)) {
          const auto key = std::make_pair(b.variables[ind->var.value], ind->value);
          auto it = indicators.find(key);
          if (it == indicators.end()) {
            it = indicators
                     .emplace(key, builder.add_indicator(spn::VariableId{static_cast<std::uint32_t>(key.first)}, key.second))
                     .first;
          }
          copy[id] = it->second;
        } else if (const auto* sum = std::get_if<spn::SumNode>(&node)) {
          std::vector<spn::NodeId> kids;
          for (auto c : sum->children) kids.push_back(copy[c]);
          copy[id] = builder.add_sum(std::move(kids), sum->weights);
        } else {
          std::vector<spn::NodeId> kids;
          for (auto c : std::get<spn::ProductNode>(node).children) kids.push_back(copy[c]);
          copy[id] = builder.add_product(std::move(kids));
        }
      }
      children.push_back(copy[t.root()]);
    }
    roots.push_back(builder.add_product(std::move(children)));
  }
  const auto root = builder.add_sum(roots, root_weights_);
  return std::move(builder).build(root);
}

InstanceSpn instantiate(const GraphSpnModel& model, const graph::TopoGraph& graph, const InstantiationConfig& config) {
  check(config);
  return InstanceSpn(model, graph,
                     templates::multi_decompose(graph, model.templates, config.num_decompositions, config.rng_seed),
                     config.root_weights);
}

InstanceSpn instantiate_incremental(const GraphSpnModel& model, const graph::TopoGraph& graph,
                                    const InstanceSpn& previous, const InstantiationConfig& config) {
  check(config);
  std::vector<Decomposition> decompositions;
  for (int d = 0; d < config.num_decompositions; ++d) {
    Rng rng = make_rng(derive_seed(config.rng_seed, static_cast<std::uint64_t>(d)));
    const auto& prev = previous.decompositions();
    if (static_cast<std::size_t>(d) < prev.size()) {
      decompositions.push_back(templates::extend_decomposition(graph, prev[d], model.templates, rng));
    } else {
      decompositions.push_back(templates::decompose(graph, model.templates, rng));
    }
  }
  return InstanceSpn(model, graph, std::move(decompositions), config.root_weights);
}

spn::Evidence evidence_from_graph(const graph::TopoGraph& graph) {
  spn::Evidence ev(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& node = graph.nodes[i];
    if (node.is_placeholder || !node.evidence) continue;
    ev.set_soft(i, std::vector<double>(node.evidence->begin(), node.evidence->end()));
  }
  return ev;
}

namespace {

std::uint32_t argmax(const std::vector<double>& row) {
  return static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

}  // namespace

Classification classify_marginal(const InstanceSpn& instance, const spn::Evidence& evidence) {
  Classification out;
  out.posteriors = instance.marginals(evidence);
  for (const auto& row : out.posteriors) out.labels.push_back(argmax(row));
  return out;
}

Classification classify_marginal(const InstanceSpn& instance, const graph::TopoGraph& graph) {
  return classify_marginal(instance, evidence_from_graph(graph));
}

std::vector<PlaceholderPosterior> infer_placeholders(const InstanceSpn& instance, const graph::TopoGraph& graph) {
  std::vector<PlaceholderPosterior> out;
  bool any = false;
  for (const auto& n : graph.nodes) any = any || n.is_placeholder;
  if (!any) return out;
  const auto posteriors = instance.marginals(evidence_from_graph(graph));
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].is_placeholder) out.push_back({graph.nodes[i].id, posteriors[i]});
  }
  return out;
}

std::vector<std::uint32_t> mpe_labels(const InstanceSpn& instance, const spn::Evidence& evidence) {
  return instance.mpe(evidence).assignment;
}

std::vector<std::uint32_t> mpe_labels(const InstanceSpn& instance, const graph::TopoGraph& graph) {
  return mpe_labels(instance, evidence_from_graph(graph));
}

double normalized_log_likelihood(const InstanceSpn& instance, const graph::TopoGraph& graph) {
  std::vector<std::uint32_t> labels;
  for (const auto& n : graph.nodes) {
    if (!n.groundtruth) {
      throw DataError("graph '" + graph.id + "': node " + std::to_string(n.id) + " has no label to score");
    }
    labels.push_back(graph::index_of(*n.groundtruth));
  }
  return instance.eval_log(spn::Evidence::observed(labels)) / static_cast<double>(labels.size());
}

}  // namespace graphspn::model
