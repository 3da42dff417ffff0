#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphspn/graph/topo_graph.hpp"
#include "graphspn/learn/hard_em.hpp"
#include "graphspn/learn/structure.hpp"
#include "graphspn/spn/spn.hpp"
#include "graphspn/templates/templates.hpp"

namespace graphspn::model {

using learn::Sample;

// Distribution over the labels of a template's slots, slot i being SPN
// variable i. The network is shared: instances built from the model see any
// later weight change.
struct TemplateSpn {
  std::string template_id;
  std::shared_ptr<spn::Spn> spn;
};

struct GraphSpnModel {
  std::uint32_t num_categories = graph::kNumCategories;
  std::vector<templates::SubGraphTemplate> templates;
  std::map<std::string, TemplateSpn> spns;

  // Throws ConfigError for a template the model does not know.
  const TemplateSpn& at(const std::string& template_id) const;
};

// Uniform distribution over n variables of the given cardinality: a product
// of uniform sums (a single sum when n is 1).
spn::Spn uniform_spn(std::size_t num_variables, std::uint32_t cardinality);

// Label tuples per template id, in slot order, each followed by its images
// under the template's non-trivial automorphisms. Every graph is decomposed
// `repetitions` times, graph g with master seed derive_seed(seed, g).
// Single-node templates are skipped. Throws DataError when a node lacks
// groundtruth.
std::map<std::string, std::vector<Sample>> extract_training_components(
    std::span<const graph::TopoGraph> graphs, const std::vector<templates::SubGraphTemplate>& templates,
    int repetitions, std::uint64_t seed);

struct TemplateTrainingReport {
  std::string template_id;
  std::size_t samples = 0;
  std::vector<double> trace;
  std::size_t edges_before_prune = 0;
  std::size_t edges_after_prune = 0;
  bool uniform_fallback = false;
};

struct TrainingReport {
  std::vector<TemplateTrainingReport> templates;
  std::vector<std::string> warnings;
};

struct TemplateTrainingConfig {
  learn::StructureParams structure;
  learn::TrainConfig train;
  int repetitions = 10;
  std::uint64_t seed = 0;  // drives the training decompositions
};

// One dense-structure, hard-EM-trained and pruned SPN per multi-node
// template; single-node templates are uniform. Structure and training seeds
// are derived per template from the configured rng_seed fields. A template
// without training components falls back to uniform with a warning.
GraphSpnModel train_templates(std::span<const graph::TopoGraph> graphs,
                              const std::vector<templates::SubGraphTemplate>& templates,
                              const TemplateTrainingConfig& config, TrainingReport* report = nullptr);

}  // namespace graphspn::model
