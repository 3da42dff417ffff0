#include "graphspn/experiment/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/graph/noise.hpp"
#include "graphspn/graph/synth.hpp"
#include "graphspn/model/bundle.hpp"

namespace graphspn::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t floor_seed(const DatasetConfig& config, const std::string& id) {
  return derive_seed(config.floor.rng_seed, fnv1a64(id.data(), id.size()));
}

int draw_in(Rng& rng, const std::array<int, 2>& range) {
  return range[0] + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(range[1] - range[0] + 1)));
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

fs::path test_graph_path(const fs::path& dir, const std::string& floor, int k, int level) {
  return dir / "noisy" / ("L" + std::to_string(level)) / (floor + "_e" + std::to_string(k) + ".json");
}

}  // namespace

std::string floor_id(const std::string& building, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_f%02d", index);
  return building + buf;
}

std::vector<graph::TopoGraph> generate_floors(const DatasetConfig& config) {
  std::vector<graph::TopoGraph> out;
  for (const auto& building : config.buildings) {
    for (int i = 0; i < config.floors_per_building; ++i) {
      const std::string id = floor_id(building, i);
      Rng rng = make_rng(floor_seed(config, id));
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) throw ConfigError("could not draw a floor within node_count_range");
        graph::SynthFloorParams p = config.floor;
        p.corridor_length = draw_in(rng, config.corridor_length_range);
        p.rooms_per_corridor = draw_in(rng, config.rooms_range);
        p.rng_seed = rng();
        auto g = graph::generate_synthetic_floor(p, id, building);
        const auto n = static_cast<int>(g.size());
        if (n >= config.node_count_range[0] && n <= config.node_count_range[1]) {
          out.push_back(std::move(g));
          break;
        }
      }
    }
  }
  return out;
}

graph::TopoGraph demote_placeholders(const graph::TopoGraph& graph, double fraction, std::uint64_t seed) {
  graph::TopoGraph out = graph;
  if (fraction <= 0.0 || graph.nodes.empty()) return out;
  const auto n = graph.size();
  auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = make_rng(seed);
  shuffle(order.begin(), order.end(), rng);
  for (std::size_t j = 0; j < count; ++j) {
    auto& node = out.nodes[order[j]];
    node.is_placeholder = true;
    node.evidence.reset();
    node.evidence_incorrect = false;
  }
  return out;
}

graph::TopoGraph make_test_graph(const graph::TopoGraph& clean, const DatasetConfig& config, int evidence_set,
                                 const graph::NoiseLevel& level) {
  const std::uint64_t base = floor_seed(config, clean.id);
  const auto k = static_cast<std::uint64_t>(evidence_set);
  auto g = demote_placeholders(clean, config.placeholder_fraction, derive_seed(base, 1000 + k));
  g = graph::apply_noise(g, level, derive_seed(base, 100000 + 100 * static_cast<std::uint64_t>(level.level) + k));
  g.id = clean.id + "_e" + std::to_string(evidence_set);
  return g;
}

const graph::NoiseLevel& noise_level(const DatasetConfig& config, int level) {
  for (const auto& l : config.noise_levels) {
    if (l.level == level) return l;
  }
  throw ConfigError("noise level " + std::to_string(level) + " is not defined");
}

std::string dataset_fingerprint(const ExperimentConfig& config) {
  return model::config_hash({{"seed", config.seed}, {"dataset", to_json(config)["dataset"]}});
}

void write_dataset(const ExperimentConfig& config, const fs::path& dir) {
  const auto floors = generate_floors(config.dataset);
  make_dirs(dir / "clean");
  json floor_list = json::array();
  for (const auto& g : floors) {
    graph::save_graph(g, dir / "clean" / (g.id + ".json"));
    floor_list.push_back({{"id", g.id}, {"building", g.building}, {"nodes", g.size()}});
  }
  std::vector<graph::NoiseStatsRow> stats;
  for (int level : config.levels) {
    const auto& nl = noise_level(config.dataset, level);
    make_dirs(dir / "noisy" / ("L" + std::to_string(level)));
    std::vector<graph::TopoGraph> noisy;
    for (const auto& g : floors) {
      for (int k = 0; k < config.dataset.evidence_sets; ++k) {
        noisy.push_back(make_test_graph(g, config.dataset, k, nl));
        graph::save_graph(noisy.back(), test_graph_path(dir, g.id, k, level));
      }
    }
    stats.push_back({level, graph::noise_stats(noisy)});
  }
  std::ofstream csv(dir / "noise_stats.csv");
  if (!csv) throw DataError("cannot write " + (dir / "noise_stats.csv").string());
  graph::write_noise_stats_csv(csv, stats);

  const json manifest = {{"seed", config.seed},
                         {"dataset_fingerprint", dataset_fingerprint(config)},
                         {"levels", config.levels},
                         {"evidence_sets", config.dataset.evidence_sets},
                         {"floors", floor_list}};
  std::ofstream out(dir / "dataset.json");
  if (!out) throw DataError("cannot write " + (dir / "dataset.json").string());
  out << manifest.dump(2) << '\n';
}

std::vector<graph::TopoGraph> load_clean_floors(const ExperimentConfig& config, const fs::path& dir,
                                                const std::vector<std::string>& buildings) {
  std::ifstream in(dir / "dataset.json");
  if (!in) throw DataError("no dataset at " + dir.string() + " (run gen first)");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed dataset.json: " + std::string(e.what()));
  }
  if (manifest.value("dataset_fingerprint", "") != dataset_fingerprint(config)) {
    throw DataError("dataset at " + dir.string() + " was generated from a different config or seed (run gen again)");
  }
  std::vector<graph::TopoGraph> out;
  for (const auto& f : manifest.at("floors")) {
    const auto building = f.at("building").get<std::string>();
    if (!buildings.empty() && std::find(buildings.begin(), buildings.end(), building) == buildings.end()) continue;
    out.push_back(graph::load_graph(dir / "clean" / (f.at("id").get<std::string>() + ".json")));
  }
  return out;
}

graph::TopoGraph load_test_graph(const fs::path& dir, const std::string& floor, int evidence_set, int level) {
  const auto path = test_graph_path(dir, floor, evidence_set, level);
  if (!fs::exists(path)) throw DataError("missing test graph " + path.string() + " (run gen with this level)");
  return graph::load_graph(path);
}

}  // namespace graphspn::experiment
