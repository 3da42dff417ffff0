#include "graphspn/experiment/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/learn/config_io.hpp"

namespace graphspn::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

json inline_or_file(const json& value, const fs::path& base_dir) {
  return value.is_string() ? read_json(base_dir / value.get<std::string>()) : value;
}

std::array<int, 2> int_range(const json& v, const std::string& key) {
  const auto r = v.get<std::vector<int>>();
  if (r.size() != 2 || r[0] > r[1]) throw ConfigError(key + " must be [lo, hi] with lo <= hi");
  return {r[0], r[1]};
}

template <typename F>
void for_each_key(const json& doc, const std::string& section, F&& handle) {
  if (!doc.is_object()) throw ConfigError(section + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (!handle(key, value)) throw ConfigError("unknown key '" + key + "' in " + section);
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + key + "' in " + section);
    }
  }
}

DatasetConfig dataset_from_json(const json& doc, const fs::path& base_dir) {
  DatasetConfig d;
  for_each_key(doc, "dataset", [&](const std::string& key, const json& v) {
    if (key == "buildings") {
      d.buildings = v.get<std::vector<std::string>>();
    } else if (key == "floors_per_building") {
      d.floors_per_building = v.get<int>();
    } else if (key == "corridor_length_range") {
      d.corridor_length_range = int_range(v, key);
    } else if (key == "rooms_range") {
      d.rooms_range = int_range(v, key);
    } else if (key == "node_count_range") {
      d.node_count_range = int_range(v, key);
    } else if (key == "floor") {
      d.floor = graph::synth_params_from_json(v);
    } else if (key == "evidence_sets") {
      d.evidence_sets = v.get<int>();
    } else if (key == "placeholder_fraction") {
      d.placeholder_fraction = v.get<double>();
    } else if (key == "noise_levels") {
      d.noise_levels = graph::noise_levels_from_json(inline_or_file(v, base_dir));
    } else {
      return false;
    }
    return true;
  });
  return d;
}

GraphSpnConfig graphspn_from_json(const json& doc, const fs::path& base_dir) {
  GraphSpnConfig g;
  for_each_key(doc, "graphspn", [&](const std::string& key, const json& v) {
    if (key == "templates") {
      g.templates = templates::templates_from_json(inline_or_file(v, base_dir));
    } else if (key == "structure") {
      g.training.structure = learn::structure_params_from_json(v);
    } else if (key == "train") {
      g.training.train = learn::train_config_from_json(v);
    } else if (key == "repetitions") {
      g.training.repetitions = v.get<int>();
    } else if (key == "instantiation") {
      g.instantiation = model::instantiation_config_from_json(v);
    } else {
      return false;
    }
    return true;
  });
  return g;
}

MrfConfig mrf_from_json(const json& doc) {
  MrfConfig m;
  for_each_key(doc, "mrf", [&](const std::string& key, const json& v) {
    if (key == "smoothing") {
      m.smoothing = v.get<double>();
    } else if (key == "bp") {
      m.bp = mrf::bp_config_from_json(v);
    } else {
      return false;
    }
    return true;
  });
  return m;
}

}  // namespace

void check(const ExperimentConfig& c) {
  const auto& d = c.dataset;
  if (d.buildings.size() < 2) throw ConfigError("need at least 2 buildings");
  std::set<std::string> names(d.buildings.begin(), d.buildings.end());
  if (names.size() != d.buildings.size()) throw ConfigError("building names must be unique");
  for (const auto& b : d.buildings) {
    if (b.empty() || b.find_first_of("/\\ ") != std::string::npos) throw ConfigError("bad building name '" + b + "'");
  }
  if (d.floors_per_building < 1) throw ConfigError("floors_per_building must be >= 1");
  if (d.corridor_length_range[0] < 1) throw ConfigError("corridor_length_range must start at >= 1");
  if (d.rooms_range[0] < 0) throw ConfigError("rooms_range must start at >= 0");
  {
    const int lo = d.corridor_length_range[0] + d.rooms_range[0] * (1 + d.floor.room_size_range[0]);
    const int hi = d.corridor_length_range[1] + d.rooms_range[1] * (1 + d.floor.room_size_range[1]);
    if (d.node_count_range[0] > hi || d.node_count_range[1] < lo) {
      throw ConfigError("node_count_range cannot be reached with the corridor, room and room size ranges");
    }
  }
  graph::check(d.floor);
  if (d.evidence_sets < 1) throw ConfigError("evidence_sets must be >= 1");
  if (!(d.placeholder_fraction >= 0.0 && d.placeholder_fraction < 1.0)) {
    throw ConfigError("placeholder_fraction must be in [0, 1)");
  }
  for (const auto& l : d.noise_levels) graph::check(l);
  if (c.models.empty()) throw ConfigError("no models selected");
  for (const auto& m : c.models) {
    if (std::find(kModelNames.begin(), kModelNames.end(), m) == kModelNames.end()) {
      throw ConfigError("unknown model '" + m + "' (expected graphspn, mrf2 or mrf3)");
    }
  }
  for (int level : c.levels) {
    const bool known = std::any_of(d.noise_levels.begin(), d.noise_levels.end(),
                                   [&](const graph::NoiseLevel& l) { return l.level == level; });
    if (!known) throw ConfigError("noise level " + std::to_string(level) + " is not defined");
  }
  learn::check(c.graphspn.training.structure);
  learn::check(c.graphspn.training.train);
  if (c.graphspn.training.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  model::check(c.graphspn.instantiation);
  for (const auto& t : c.graphspn.templates) templates::check(t);
  if (!(c.mrf.smoothing >= 0.0)) throw ConfigError("mrf smoothing must be >= 0");
  mrf::check(c.mrf.bp);
}

void apply_seed(ExperimentConfig& c, std::uint64_t seed) {
  c.seed = seed;
  c.dataset.floor.rng_seed = derive_seed(seed, 1);
  c.graphspn.training.seed = derive_seed(seed, 2);
  c.graphspn.training.structure.rng_seed = derive_seed(seed, 3);
  c.graphspn.training.train.rng_seed = derive_seed(seed, 4);
  c.graphspn.instantiation.rng_seed = derive_seed(seed, 5);
  c.mrf.bp.rng_seed = derive_seed(seed, 6);
}

ExperimentConfig experiment_config_from_json(const json& doc, const fs::path& base_dir) {
  ExperimentConfig c;
  std::uint64_t seed = 0;
  for_each_key(doc, "experiment config", [&](const std::string& key, const json& v) {
    if (key == "seed") {
      seed = v.get<std::uint64_t>();
    } else if (key == "dataset") {
      c.dataset = dataset_from_json(v, base_dir);
    } else if (key == "graphspn") {
      c.graphspn = graphspn_from_json(v, base_dir);
    } else if (key == "mrf") {
      c.mrf = mrf_from_json(v);
    } else if (key == "models") {
      c.models = v.get<std::vector<std::string>>();
    } else if (key == "levels") {
      c.levels = v.get<std::vector<int>>();
    } else if (key == "data_dir") {
      c.data_dir = v.get<std::string>();
    } else if (key == "model_dir") {
      c.model_dir = v.get<std::string>();
    } else if (key == "results_dir") {
      c.results_dir = v.get<std::string>();
    } else {
      return false;
    }
    return true;
  });
  apply_seed(c, seed);
  check(c);
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return experiment_config_from_json(read_json(path), path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json dataset = {{"buildings", c.dataset.buildings},
                  {"floors_per_building", c.dataset.floors_per_building},
                  {"corridor_length_range", c.dataset.corridor_length_range},
                  {"rooms_range", c.dataset.rooms_range},
                  {"node_count_range", c.dataset.node_count_range},
                  {"floor", graph::to_json(c.dataset.floor)},
                  {"evidence_sets", c.dataset.evidence_sets},
                  {"placeholder_fraction", c.dataset.placeholder_fraction},
                  {"noise_levels", graph::to_json(c.dataset.noise_levels)}};
  json graphspn = {{"templates", templates::to_json(c.graphspn.templates)},
                   {"structure", learn::to_json(c.graphspn.training.structure)},
                   {"train", learn::to_json(c.graphspn.training.train)},
                   {"repetitions", c.graphspn.training.repetitions},
                   {"instantiation", model::to_json(c.graphspn.instantiation)}};
  json mrf = {{"smoothing", c.mrf.smoothing}, {"bp", mrf::to_json(c.mrf.bp)}};
  return {{"seed", c.seed},       {"dataset", dataset},         {"graphspn", graphspn},
          {"mrf", mrf},           {"models", c.models},         {"levels", c.levels},
          {"data_dir", c.data_dir}, {"model_dir", c.model_dir}, {"results_dir", c.results_dir}};
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad level list '" + text + "'");
    }
  };
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
    } else {
      const int lo = to_int(item.substr(0, dots)), hi = to_int(item.substr(dots + 2));
      if (lo > hi) throw ConfigError("bad level range '" + item + "'");
      for (int l = lo; l <= hi; ++l) out.push_back(l);
    }
  }
  if (out.empty()) throw ConfigError("empty level list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> parse_models(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kModelNames.begin(), kModelNames.end(), item) == kModelNames.end()) {
      throw ConfigError("unknown model '" + item + "' (expected graphspn, mrf2 or mrf3)");
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty model list");
  return out;
}

}  // namespace graphspn::experiment
