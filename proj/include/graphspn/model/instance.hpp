#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"
#include "graphspn/model/model.hpp"
#include "graphspn/spn/evidence.hpp"
#include "graphspn/spn/inference.hpp"
#include "graphspn/templates/templates.hpp"

namespace graphspn::model {

struct InstantiationConfig {
  int num_decompositions = 5;
  std::uint64_t rng_seed = 0;
  // Mixture weights over decompositions; empty means uniform 1/N_D.
  // Otherwise one non-negative entry per decomposition, normalized on use.
  std::vector<double> root_weights;
};

void check(const InstantiationConfig& config);
InstantiationConfig instantiation_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const InstantiationConfig& config);

// Mixture over decompositions of one graph: each decomposition is a product
// of template SPNs bound to the variables of its components (one variable per
// graph node, indexed by node position). Inference runs component by
// component on the shared template networks; materialize() builds the
// equivalent flat network.
class InstanceSpn {
 public:
  struct Binding {
    std::string template_id;
    std::shared_ptr<spn::Spn> spn;
    std::vector<std::size_t> variables;  // slot -> node position
  };

  InstanceSpn(const GraphSpnModel& model, const graph::TopoGraph& graph,
              std::vector<templates::Decomposition> decompositions, std::vector<double> root_weights);

  std::size_t num_variables() const { return num_variables_; }
  std::uint32_t cardinality() const { return cardinality_; }
  const std::vector<templates::Decomposition>& decompositions() const { return decompositions_; }
  const std::vector<std::vector<Binding>>& products() const { return products_; }
  const std::vector<double>& root_weights() const { return root_weights_; }

  double eval_log(const spn::Evidence& evidence) const;
  std::vector<std::vector<double>> marginals(const spn::Evidence& evidence) const;
  spn::MpeResult mpe(const spn::Evidence& evidence) const;

  spn::Spn materialize() const;

 private:
  spn::Evidence sub_evidence(const spn::Evidence& evidence, const Binding& b) const;
  std::vector<std::vector<double>> component_log_values(const spn::Evidence& evidence) const;

  std::size_t num_variables_;
  std::uint32_t cardinality_;
  std::vector<templates::Decomposition> decompositions_;
  std::vector<std::vector<Binding>> products_;
  std::vector<double> root_weights_;
};

InstanceSpn instantiate(const GraphSpnModel& model, const graph::TopoGraph& graph, const InstantiationConfig& config);

// Rebuilds an instance after nodes were appended to the graph, keeping every
// previous component that still fits and decomposing only the new remainder.
InstanceSpn instantiate_incremental(const GraphSpnModel& model, const graph::TopoGraph& graph,
                                    const InstanceSpn& previous, const InstantiationConfig& config);

// Soft evidence from node evidence vectors; placeholders and nodes without
// evidence are marginalized.
spn::Evidence evidence_from_graph(const graph::TopoGraph& graph);

struct Classification {
  std::vector<std::vector<double>> posteriors;  // per node position
  std::vector<std::uint32_t> labels;            // argmax, lowest index on ties
};

Classification classify_marginal(const InstanceSpn& instance, const spn::Evidence& evidence);
Classification classify_marginal(const InstanceSpn& instance, const graph::TopoGraph& graph);

struct PlaceholderPosterior {
  graph::NodeId node = 0;
  std::vector<double> posterior;
};

std::vector<PlaceholderPosterior> infer_placeholders(const InstanceSpn& instance, const graph::TopoGraph& graph);

std::vector<std::uint32_t> mpe_labels(const InstanceSpn& instance, const spn::Evidence& evidence);
std::vector<std::uint32_t> mpe_labels(const InstanceSpn& instance, const graph::TopoGraph& graph);

// Log-likelihood of the groundtruth labels of every node divided by the node
// count. Throws DataError when a node has no groundtruth.
double normalized_log_likelihood(const InstanceSpn& instance, const graph::TopoGraph& graph);

}  // namespace graphspn::model
