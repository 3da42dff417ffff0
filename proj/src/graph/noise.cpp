#include "graphspn/graph/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"

namespace graphspn::graph {

using nlohmann::json;

namespace {

// Realized statistics (mean, std) per level for D_groundtruth and D_incorrect.
struct LevelMoments {
  double gt_mean, gt_std, inc_mean, inc_std;
};
constexpr LevelMoments kMoments[6] = {
    {0.991, 0.001, 0.0, 0.0},     {0.913, 0.015, 0.085, 0.056}, {0.720, 0.040, 0.090, 0.061},
    {0.434, 0.054, 0.092, 0.062}, {0.316, 0.030, 0.154, 0.055}, {0.154, 0.021, 0.217, 0.074},
};

bool valid_interval(const Interval& r) { return 0.0 <= r.lo && r.lo <= r.hi && r.hi <= 1.0; }

Interval interval_from_json(const json& v, const char* key) {
  try {
    const auto pair = v.get<std::array<double, 2>>();
    return {pair[0], pair[1]};
  } catch (const json::exception&) {
    throw ConfigError(std::string("'") + key + "' must be a [lo, hi] pair");
  }
}

struct Stats {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (!n) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - m * m));
  }
};

// Builds an evidence vector with `top` on top, `second` second and a gap d
// between them; the other classes share the remaining mass, each at most the
// second value.
Evidence build_evidence(std::uint32_t top, std::uint32_t second, double d, Rng& rng) {
  std::vector<double> u;
  double u_total = 0.0;
  for (std::uint32_t k = 0; k < kNumCategories; ++k) {
    if (k == top || k == second) continue;
    u.push_back(-std::log(1.0 - uniform_real(rng, 0.0, 1.0)));
    u_total += u.back();
  }
  double u_max = 0.0;
  for (double& x : u) {
    x /= u_total;
    u_max = std::max(u_max, x);
  }
  // Others are c * s * u_k with c * u_k <= 1, so none exceeds s; t + s + c s = 1.
  const double c = uniform_real(rng, 0.0, 1.0 / u_max);
  const double t = (1.0 + d * (1.0 + c)) / (2.0 + c);
  const double s = std::max(0.0, t - d);
  Evidence e{};
  std::size_t j = 0;
  for (std::uint32_t k = 0; k < kNumCategories; ++k) {
    if (k == top) {
      e[k] = t;
    } else if (k == second) {
      e[k] = s;
    } else {
      e[k] = c * s * u[j++];
    }
  }
  const double total = std::accumulate(e.begin(), e.end(), 0.0);
  for (double& x : e) x /= total;
  return e;
}

std::uint32_t other_class(std::uint32_t exclude, Rng& rng) {
  const auto k = static_cast<std::uint32_t>(uniform_index(rng, kNumCategories - 1));
  return k >= exclude ? k + 1 : k;
}

}  // namespace

void check(const NoiseLevel& level) {
  if (!valid_interval(level.gt_range)) throw ConfigError("noise level " + std::to_string(level.level) + ": bad gt_range");
  if (!valid_interval(level.inc_range)) throw ConfigError("noise level " + std::to_string(level.level) + ": bad inc_range");
  if (!(level.incorrect_fraction >= 0.0 && level.incorrect_fraction <= 1.0)) {
    throw ConfigError("noise level " + std::to_string(level.level) + ": incorrect_fraction must be in [0, 1]");
  }
}

Interval moment_matched_interval(double mean, double stddev) {
  const double lo = std::max(0.0, mean - std::sqrt(3.0) * stddev);
  return {lo, 2.0 * mean - lo};
}

std::vector<NoiseLevel> default_noise_levels() {
  std::vector<NoiseLevel> out;
  for (int i = 0; i < 6; ++i) {
    NoiseLevel level;
    level.level = i + 1;
    level.gt_range = moment_matched_interval(kMoments[i].gt_mean, kMoments[i].gt_std);
    level.inc_range = moment_matched_interval(kMoments[i].inc_mean, kMoments[i].inc_std);
    out.push_back(level);
  }
  return out;
}

std::vector<NoiseLevel> noise_levels_from_json(const json& doc) {
  const json& list = doc.is_object() && doc.contains("levels") ? doc.at("levels") : doc;
  if (!list.is_array()) throw ConfigError("noise levels must be a JSON array");
  std::vector<NoiseLevel> out;
  for (const auto& entry : list) {
    if (!entry.is_object()) throw ConfigError("noise level entries must be objects");
    NoiseLevel level;
    for (const auto& [key, value] : entry.items()) {
      if (key == "level") {
        if (!value.is_number_integer()) throw ConfigError("'level' must be an integer");
        level.level = value.get<int>();
      } else if (key == "gt_range") {
        level.gt_range = interval_from_json(value, "gt_range");
      } else if (key == "inc_range") {
        level.inc_range = interval_from_json(value, "inc_range");
      } else if (key == "incorrect_fraction") {
        if (!value.is_number()) throw ConfigError("'incorrect_fraction' must be a number");
        level.incorrect_fraction = value.get<double>();
      } else {
        throw ConfigError("unknown key '" + key + "' in noise level");
      }
    }
    check(level);
    out.push_back(level);
  }
  return out;
}

json to_json(std::span<const NoiseLevel> levels) {
  json list = json::array();
  for (const auto& l : levels) {
    list.push_back({{"level", l.level},
                    {"gt_range", {l.gt_range.lo, l.gt_range.hi}},
                    {"inc_range", {l.inc_range.lo, l.inc_range.hi}},
                    {"incorrect_fraction", l.incorrect_fraction}});
  }
  return {{"levels", list}};
}

TopoGraph apply_noise(const TopoGraph& graph, const NoiseLevel& level, std::uint64_t rng_seed) {
  check(level);
  TopoGraph out = graph;
  std::vector<std::size_t> observed;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    auto& node = out.nodes[i];
    node.evidence.reset();
    node.evidence_incorrect = false;
    if (node.is_placeholder) continue;
    if (!node.groundtruth) {
      throw DataError("graph '" + graph.id + "': node " + std::to_string(node.id) + " has no groundtruth");
    }
    observed.push_back(i);
  }

  Rng rng = make_rng(rng_seed);
  // The small slack keeps e.g. 0.2 * 10 from rounding up to 3.
  const auto n_incorrect = static_cast<std::size_t>(
      std::ceil(level.incorrect_fraction * static_cast<double>(observed.size()) - 1e-9));
  std::vector<std::size_t> order = observed;
  shuffle(order.begin(), order.end(), rng);
  std::vector<bool> incorrect(out.nodes.size(), false);
  for (std::size_t k = 0; k < n_incorrect; ++k) incorrect[order[k]] = true;

  for (std::size_t i : observed) {
    auto& node = out.nodes[i];
    const std::uint32_t gt = index_of(*node.groundtruth);
    if (incorrect[i]) {
      const std::uint32_t wrong = other_class(gt, rng);
      const double d = uniform_real(rng, level.inc_range.lo, level.inc_range.hi);
      node.evidence = build_evidence(wrong, gt, d, rng);
      node.evidence_incorrect = true;
    } else {
      const std::uint32_t second = other_class(gt, rng);
      const double d = uniform_real(rng, level.gt_range.lo, level.gt_range.hi);
      node.evidence = build_evidence(gt, second, d, rng);
    }
  }
  return out;
}

NoiseStats noise_stats(std::span<const TopoGraph> graphs) {
  Stats gt;
  Stats inc;
  for (const auto& g : graphs) {
    for (const auto& node : g.nodes) {
      if (node.is_placeholder || !node.evidence || !node.groundtruth) continue;
      const auto& e = *node.evidence;
      const std::uint32_t truth = index_of(*node.groundtruth);
      double best_other = 0.0;
      for (std::uint32_t k = 0; k < kNumCategories; ++k) {
        if (k != truth) best_other = std::max(best_other, e[k]);
      }
      if (node.evidence_incorrect) {
        inc.add(best_other - e[truth]);
      } else {
        gt.add(e[truth] - best_other);
      }
    }
  }
  return {gt.n, gt.mean(), gt.stddev(), inc.n, inc.mean(), inc.stddev()};
}

void write_noise_stats_csv(std::ostream& out, std::span<const NoiseStatsRow> rows) {
  out << "level,correct_nodes,gt_mean,gt_std,incorrect_nodes,inc_mean,inc_std\n";
  char buf[256];
  for (const auto& r : rows) {
    const auto& s = r.stats;
    std::snprintf(buf, sizeof buf, "%d,%zu,%.6f,%.6f,%zu,%.6f,%.6f\n", r.level, s.correct_nodes, s.gt_mean, s.gt_std,
                  s.incorrect_nodes, s.inc_mean, s.inc_std);
    out << buf;
  }
}

}  // namespace graphspn::graph
