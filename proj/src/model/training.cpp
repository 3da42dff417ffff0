#include "graphspn/model/model.hpp"

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/learn/prune.hpp"
#include "graphspn/templates/decompose.hpp"

namespace graphspn::model {

const TemplateSpn& GraphSpnModel::at(const std::string& template_id) const {
  const auto it = spns.find(template_id);
  if (it == spns.end()) throw ConfigError("model has no SPN for template '" + template_id + "'");
  return it->second;
}

spn::Spn uniform_spn(std::size_t num_variables, std::uint32_t cardinality) {
  spn::SpnBuilder b(spn::make_variables(num_variables, cardinality));
  std::vector<spn::NodeId> sums;
  for (std::uint32_t v = 0; v < num_variables; ++v) {
    std::vector<spn::NodeId> leaves;
    for (std::uint32_t k = 0; k < cardinality; ++k) leaves.push_back(b.add_indicator(spn::VariableId{v}, k));
    sums.push_back(b.add_sum(leaves, std::vector<double>(cardinality, 1.0 / cardinality)));
  }
  if (sums.size() == 1) return std::move(b).build(sums.front());
  const auto root = b.add_product(sums);
  return std::move(b).build(root);
}

std::map<std::string, std::vector<Sample>> extract_training_components(
    std::span<const graph::TopoGraph> graphs, const std::vector<templates::SubGraphTemplate>& templates,
    int repetitions, std::uint64_t seed) {
  std::map<std::string, std::vector<std::vector<int>>> autos;
  std::map<std::string, std::vector<Sample>> out;
  for (const auto& t : templates) {
    if (t.node_count > 1) {
      autos[t.id] = templates::automorphisms(t);
      out[t.id];
    }
  }
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto& graph = graphs[g];
    std::map<graph::NodeId, std::uint32_t> label;
    for (const auto& node : graph.nodes) {
      if (!node.groundtruth) {
        throw DataError("graph '" + graph.id + "': node " + std::to_string(node.id) + " has no groundtruth");
      }
      label[node.id] = graph::index_of(*node.groundtruth);
    }
    for (const auto& d : templates::multi_decompose(graph, templates, repetitions, derive_seed(seed, g))) {
      for (const auto& c : d.components) {
        const auto it = autos.find(c.template_id);
        if (it == autos.end()) continue;
        for (const auto& perm : it->second) {
          Sample tuple(c.node_ids.size());
          for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = label.at(c.node_ids[perm[i]]);
          out[c.template_id].push_back(std::move(tuple));
        }
      }
    }
  }
  return out;
}

GraphSpnModel train_templates(std::span<const graph::TopoGraph> graphs,
                              const std::vector<templates::SubGraphTemplate>& templates,
                              const TemplateTrainingConfig& config, TrainingReport* report) {
  if (graphs.empty()) throw DataError("training set is empty");
  learn::check(config.structure);
  learn::check(config.train);
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");

  const auto samples = extract_training_components(graphs, templates, config.repetitions, config.seed);
  GraphSpnModel model;
  model.templates = templates;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const auto& t = templates[i];
    TemplateTrainingReport entry;
    entry.template_id = t.id;
    const auto n = static_cast<std::size_t>(t.node_count);
    std::shared_ptr<spn::Spn> net;
    const auto it = samples.find(t.id);
    if (t.node_count == 1) {
      net = std::make_shared<spn::Spn>(uniform_spn(1, model.num_categories));
    } else if (it == samples.end() || it->second.empty()) {
      net = std::make_shared<spn::Spn>(uniform_spn(n, model.num_categories));
      entry.uniform_fallback = true;
      if (report) report->warnings.push_back("template '" + t.id + "' has no training components; using uniform");
    } else {
      learn::StructureParams sp = config.structure;
      sp.rng_seed = derive_seed(config.structure.rng_seed, i);
      learn::TrainConfig tc = config.train;
      tc.rng_seed = derive_seed(config.train.rng_seed, i);
      const auto vars = spn::make_variables(n, model.num_categories);
      auto trained = learn::train(learn::generate_dense_structure(vars, sp), it->second, tc);
      entry.samples = it->second.size();
      entry.trace = std::move(trained.trace);
      entry.edges_before_prune = trained.spn.num_edges();
      net = std::make_shared<spn::Spn>(learn::prune(trained.spn, tc.prune_epsilon));
      entry.edges_after_prune = net->num_edges();
    }
    model.spns.emplace(t.id, TemplateSpn{t.id, std::move(net)});
    if (report) report->templates.push_back(std::move(entry));
  }
  return model;
}

}  // namespace graphspn::model
