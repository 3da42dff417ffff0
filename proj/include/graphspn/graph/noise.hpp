#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"

#include "graphspn/graph/topo_graph.hpp"

namespace graphspn::graph {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct NoiseLevel {
  int level = 1;
  Interval gt_range;   // gap between P(groundtruth) and the runner-up
  Interval inc_range;  // gap between the wrong top class and P(groundtruth)
  double incorrect_fraction = 0.20;
};

void check(const NoiseLevel& level);

// Uniform intervals whose mean and standard deviation match the realized gap
// statistics observed for levels 1..6 (lower end clipped at 0, mean kept).
std::vector<NoiseLevel> default_noise_levels();

// Uniform interval with the given mean and standard deviation, clipped at 0
// from below while keeping the mean.
Interval moment_matched_interval(double mean, double stddev);

std::vector<NoiseLevel> noise_levels_from_json(const nlohmann::json& doc);
nlohmann::json to_json(std::span<const NoiseLevel> levels);

// Attaches a 10-way evidence distribution to every non-placeholder node.
// ceil(incorrect_fraction * N) nodes get a wrong class on top, D_incorrect
// above the groundtruth; the rest keep the groundtruth on top, D_groundtruth
// above the runner-up. Throws DataError for a non-placeholder node without
// groundtruth.
TopoGraph apply_noise(const TopoGraph& graph, const NoiseLevel& level, std::uint64_t rng_seed);

struct NoiseStats {
  std::size_t correct_nodes = 0;
  double gt_mean = 0.0;
  double gt_std = 0.0;
  std::size_t incorrect_nodes = 0;
  double inc_mean = 0.0;
  double inc_std = 0.0;
};

// Recomputes the two gaps from evidence vectors and incorrect flags over all
// non-placeholder nodes. Population standard deviations.
NoiseStats noise_stats(std::span<const TopoGraph> graphs);

struct NoiseStatsRow {
  int level = 0;
  NoiseStats stats;
};

// CSV: level,correct_nodes,gt_mean,gt_std,incorrect_nodes,inc_mean,inc_std
void write_noise_stats_csv(std::ostream& out, std::span<const NoiseStatsRow> rows);

}  // namespace graphspn::graph
