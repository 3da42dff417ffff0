#include "graphspn/learn/config_io.hpp"

#include <set>
#include <string>

#include "graphspn/common/errors.hpp"

namespace graphspn::learn {

using nlohmann::json;

namespace {

void reject_unknown(const json& doc, const std::set<std::string>& known, const char* what) {
  if (!doc.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + what);
  }
}

template <typename T>
void read(const json& doc, const char* key, T& into) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

}  // namespace

StructureParams structure_params_from_json(const json& doc) {
  reject_unknown(doc,
                 {"num_decompositions_per_scope", "num_subsets_per_decomposition", "num_sums_per_subscope",
                  "rng_seed"},
                 "structure params");
  StructureParams p;
  read(doc, "num_decompositions_per_scope", p.num_decompositions_per_scope);
  read(doc, "num_subsets_per_decomposition", p.num_subsets_per_decomposition);
  read(doc, "num_sums_per_subscope", p.num_sums_per_subscope);
  read(doc, "rng_seed", p.rng_seed);
  check(p);
  return p;
}

TrainConfig train_config_from_json(const json& doc) {
  reject_unknown(doc, {"max_epochs", "rel_loglik_tolerance", "count_smoothing", "prune_epsilon", "unweighted_selection",
                       "leaf_init", "leaf_peak", "rng_seed"},
                 "train config");
  TrainConfig c;
  read(doc, "max_epochs", c.max_epochs);
  read(doc, "rel_loglik_tolerance", c.rel_loglik_tolerance);
  read(doc, "count_smoothing", c.count_smoothing);
  read(doc, "prune_epsilon", c.prune_epsilon);
  read(doc, "unweighted_selection", c.unweighted_selection);
  read(doc, "leaf_peak", c.leaf_peak);
  if (doc.contains("leaf_init")) {
    const auto& v = doc.at("leaf_init");
    if (v == "uniform") {
      c.leaf_init = LeafInit::kUniform;
    } else if (v == "frequency") {
      c.leaf_init = LeafInit::kFrequency;
    } else {
      throw ConfigError("leaf_init must be \"uniform\" or \"frequency\"");
    }
  }
  read(doc, "rng_seed", c.rng_seed);
  check(c);
  return c;
}

json to_json(const StructureParams& p) {
  return {{"num_decompositions_per_scope", p.num_decompositions_per_scope},
          {"num_subsets_per_decomposition", p.num_subsets_per_decomposition},
          {"num_sums_per_subscope", p.num_sums_per_subscope},
          {"rng_seed", p.rng_seed}};
}

json to_json(const TrainConfig& c) {
  return {{"max_epochs", c.max_epochs},
          {"rel_loglik_tolerance", c.rel_loglik_tolerance},
          {"count_smoothing", c.count_smoothing},
          {"prune_epsilon", c.prune_epsilon},
          {"unweighted_selection", c.unweighted_selection},
          {"leaf_init", c.leaf_init == LeafInit::kFrequency ? "frequency" : "uniform"},
          {"leaf_peak", c.leaf_peak},
          {"rng_seed", c.rng_seed}};
}

}  // namespace graphspn::learn
