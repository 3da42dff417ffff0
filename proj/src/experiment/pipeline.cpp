#include "graphspn/experiment/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <tuple>

#include "graphspn/common/errors.hpp"
#include "graphspn/common/rng.hpp"
#include "graphspn/experiment/dataset.hpp"
#include "graphspn/experiment/metrics.hpp"
#include "graphspn/learn/config_io.hpp"
#include "graphspn/model/bundle.hpp"
#include "graphspn/model/instance.hpp"
#include "graphspn/mrf/belief_propagation.hpp"
#include "graphspn/mrf/factor_graph.hpp"
#include "graphspn/mrf/potentials.hpp"

namespace graphspn::experiment {

namespace fs = std::filesystem;
using graph::PlaceCategory;
using graph::TopoGraph;
using nlohmann::json;

namespace {

std::uint64_t hash_string(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string() + " (run train first)");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::size_t model_rank(const std::string& m) {
  return static_cast<std::size_t>(std::find(kModelNames.begin(), kModelNames.end(), m) - kModelNames.begin());
}

std::string training_fingerprint(const ExperimentConfig& c) {
  const json full = to_json(c);
  json g = full["graphspn"];
  g.erase("instantiation");
  return model::config_hash(
      {{"dataset", dataset_fingerprint(c)}, {"graphspn", g}, {"mrf_smoothing", c.mrf.smoothing}});
}

std::vector<std::string> train_buildings(const ExperimentConfig& c, const std::string& test) {
  std::vector<std::string> out;
  for (const auto& b : c.dataset.buildings) {
    if (b != test) out.push_back(b);
  }
  return out;
}

std::vector<std::string> test_floors(const ExperimentConfig& c, const std::string& building) {
  std::vector<std::string> out;
  for (int i = 0; i < c.dataset.floors_per_building; ++i) out.push_back(floor_id(building, i));
  return out;
}

std::uint32_t argmax(const std::vector<double>& p) {
  return static_cast<std::uint32_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

// Models of one rotation, loaded and checked against the manifest.
struct Rotation {
  std::string building;
  std::optional<model::GraphSpnModel> graphspn;
  std::map<std::string, mrf::PotentialTable> mrfs;
};

Rotation load_rotation(const ExperimentConfig& c, const OutputPaths& paths, const std::string& building) {
  const fs::path dir = paths.models / building;
  const json manifest = read_json_file(dir / "manifest.json");
  if (manifest.value("test_building", "") != building) {
    throw DataError("model manifest in " + dir.string() + " is for another rotation");
  }
  for (const auto& id : manifest.at("train_graphs")) {
    const auto s = id.get<std::string>();
    if (s.rfind(building + "_", 0) == 0) throw DataError("test floor " + s + " was used for training");
  }
  for (const auto& b : manifest.at("train_buildings")) {
    if (b.get<std::string>() == building) throw DataError("test building " + building + " was used for training");
  }
  if (manifest.value("training_fingerprint", "") != training_fingerprint(c)) {
    throw DataError("models in " + dir.string() + " were trained with a different config or seed (run train again)");
  }
  Rotation r;
  r.building = building;
  for (const auto& m : c.models) {
    if (m == "graphspn") {
      r.graphspn = model::load_model(dir / "graphspn");
    } else {
      try {
        r.mrfs.emplace(m, mrf::potential_table_from_json(read_json_file(dir / (m + ".json"))));
      } catch (const ConfigError& e) {
        throw DataError(m + " potentials: " + e.what());
      }
    }
  }
  return r;
}

model::InstanceSpn make_instance(const ExperimentConfig& c, const model::GraphSpnModel& m, const TopoGraph& g,
                                 const std::string& floor) {
  auto ic = c.graphspn.instantiation;
  ic.rng_seed = derive_seed(ic.rng_seed, hash_string(floor));
  return model::instantiate(m, g, ic);
}

std::vector<std::vector<double>> mrf_marginals(const ExperimentConfig& c, const mrf::PotentialTable& table,
                                               const TopoGraph& g, int level) {
  auto bp = c.mrf.bp;
  bp.rng_seed = derive_seed(derive_seed(bp.rng_seed, hash_string(g.id)), static_cast<std::uint64_t>(level));
  const auto fg = mrf::build_mrf(g, table);
  return mrf::loopy_bp(fg, bp).marginals;
}

struct NodeResult {
  std::vector<std::vector<double>> posteriors;
  std::string error;
};

// Runs every selected model on every test graph of every rotation and
// hands (model, level, building, floor, k, graph, posteriors) to `visit`.
template <typename Visit>
void for_each_prediction(const ExperimentConfig& c, const OutputPaths& paths, Visit&& visit) {
  for (const auto& building : c.dataset.buildings) {
    const Rotation rot = load_rotation(c, paths, building);
    std::cerr << "evaluating rotation " << building << '\n';
    for (const auto& floor : test_floors(c, building)) {
      std::optional<model::InstanceSpn> instance;
      std::string instance_error;
      for (int level : c.levels) {
        for (int k = 0; k < c.dataset.evidence_sets; ++k) {
          const TopoGraph g = load_test_graph(paths.data, floor, k, level);
          for (const auto& m : c.models) {
            NodeResult res;
            try {
              if (m == "graphspn") {
                if (!instance && instance_error.empty()) {
                  try {
                    instance.emplace(make_instance(c, *rot.graphspn, g, floor));
                  } catch (const Error& e) {
                    instance_error = e.what();
                  }
                }
                if (!instance) throw SpnError(instance_error);
                res.posteriors = model::classify_marginal(*instance, g).posteriors;
              } else {
                res.posteriors = mrf_marginals(c, rot.mrfs.at(m), g, level);
              }
            } catch (const Error& e) {
              res.error = e.what();
              std::cerr << "inference failed for " << m << " on " << g.id << " (level " << level << "): " << e.what()
                        << '\n';
            }
            visit(m, level, building, floor, k, g, res);
          }
        }
      }
    }
  }
}

void sort_rows(std::vector<AccuracyRow>& rows) {
  const auto key = [](const AccuracyRow& r) {
    return std::make_tuple(model_rank(r.model), r.level, r.building, r.graph, r.evidence_set);
  };
  std::sort(rows.begin(), rows.end(), [&](const AccuracyRow& a, const AccuracyRow& b) { return key(a) < key(b); });
}

void write_rows(const fs::path& path, const std::vector<AccuracyRow>& rows) {
  auto out = open_out(path);
  out << "model,level,building,graph,evidence_set,correct,total,accuracy,status\n";
  for (const auto& r : rows) {
    const bool ok = r.status == "ok";
    out << r.model << ',' << r.level << ',' << r.building << ',' << r.graph << ',' << r.evidence_set << ','
        << r.correct << ',' << r.total << ','
        << (ok ? fmt(static_cast<double>(r.correct) / static_cast<double>(r.total)) : std::string()) << ','
        << '"' << r.status << '"' << '\n';
  }
}

void write_summary(const fs::path& path, const std::vector<AccuracySummary>& rows) {
  auto out = open_out(path);
  out << "model,level,building,graphs,mean_accuracy,std_accuracy,pooled_accuracy\n";
  for (const auto& s : rows) {
    out << s.model << ',' << s.level << ',' << s.building << ',' << s.graphs << ',' << fmt(s.mean_accuracy) << ','
        << fmt(s.std_accuracy) << ',' << fmt(s.pooled_accuracy) << '\n';
  }
}

std::string clean_message(std::string s) {
  std::replace(s.begin(), s.end(), '"', '\'');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

OutputPaths output_paths(const ExperimentConfig& c, const fs::path& out) {
  return {out / c.data_dir, out / c.model_dir, out / c.results_dir};
}

void run_gen(const ExperimentConfig& c, const fs::path& out) {
  write_dataset(c, output_paths(c, out).data);
}

void run_train(const ExperimentConfig& c, const fs::path& out) {
  const auto paths = output_paths(c, out);
  const std::string fingerprint = training_fingerprint(c);
  for (const auto& building : c.dataset.buildings) {
    const auto train_b = train_buildings(c, building);
    const auto floors = load_clean_floors(c, paths.data, train_b);
    for (const auto& g : floors) {
      if (g.building == building) throw DataError("floor " + g.id + " of the test building reached training");
    }
    const fs::path dir = paths.models / building;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
    std::cerr << "training rotation " << building << " on " << floors.size() << " floors\n";

    json trained = json::array();
    json warnings = json::array();
    for (const auto& m : c.models) {
      if (m == "graphspn") {
        auto tc = c.graphspn.training;
        tc.seed = derive_seed(tc.seed, hash_string(building));
        model::TrainingReport report;
        const auto gm = model::train_templates(floors, c.graphspn.templates, tc, &report);
        for (const auto& w : report.warnings) {
          std::cerr << "warning: " << w << '\n';
          warnings.push_back(w);
        }
        model::save_model(gm, dir / "graphspn",
                          {{"structure", learn::to_json(tc.structure)},
                           {"train", learn::to_json(tc.train)},
                           {"repetitions", tc.repetitions},
                           {"seed", tc.seed}});
      } else {
        const int order = m == "mrf2" ? 2 : 3;
        const auto table = mrf::estimate_potentials(floors, order, c.mrf.smoothing);
        auto f = open_out(dir / (m + ".json"));
        f << mrf::to_json(table).dump() << '\n';
      }
      trained.push_back(m);
    }
    json ids = json::array();
    for (const auto& g : floors) ids.push_back(g.id);
    const json manifest = {{"test_building", building},
                           {"train_buildings", train_b},
                           {"train_graphs", ids},
                           {"models", trained},
                           {"seed", c.seed},
                           {"training_fingerprint", fingerprint},
                           {"warnings", warnings}};
    auto f = open_out(dir / "manifest.json");
    f << manifest.dump(2) << '\n';
  }
}

std::vector<AccuracySummary> summarize(const ExperimentConfig& c, const std::vector<AccuracyRow>& rows) {
  struct Acc {
    std::vector<double> per_graph;
    std::size_t correct = 0, total = 0;
  };
  std::map<std::tuple<std::size_t, int, std::string>, Acc> groups;
  for (const auto& r : rows) {
    if (r.status != "ok" || r.total == 0) continue;
    for (const std::string& b : {r.building, std::string("all")}) {
      auto& a = groups[{model_rank(r.model), r.level, b}];
      a.per_graph.push_back(static_cast<double>(r.correct) / static_cast<double>(r.total));
      a.correct += r.correct;
      a.total += r.total;
    }
  }
  std::vector<AccuracySummary> out;
  for (const auto& m : c.models) {
    for (int level : c.levels) {
      std::vector<std::string> names = c.dataset.buildings;
      names.push_back("all");
      for (const auto& b : names) {
        const auto it = groups.find({model_rank(m), level, b});
        if (it == groups.end()) continue;
        const auto ms = mean_std(it->second.per_graph);
        out.push_back({m, level, b, it->second.per_graph.size(), ms.mean, ms.std,
                       static_cast<double>(it->second.correct) / static_cast<double>(it->second.total)});
      }
    }
  }
  return out;
}

std::vector<AccuracyRow> run_eval_class(const ExperimentConfig& c, const fs::path& out) {
  const auto paths = output_paths(c, out);
  std::vector<AccuracyRow> rows;
  for_each_prediction(c, paths,
                      [&](const std::string& m, int level, const std::string& building, const std::string& floor, int k,
                          const TopoGraph& g, const NodeResult& res) {
                        AccuracyRow row{m, level, building, floor, k, 0, 0, "ok"};
                        for (std::size_t i = 0; i < g.size(); ++i) {
                          if (!g.nodes[i].is_placeholder) ++row.total;
                        }
                        if (!res.error.empty()) {
                          row.status = "error: " + clean_message(res.error);
                        } else {
                          for (std::size_t i = 0; i < g.size(); ++i) {
                            const auto& node = g.nodes[i];
                            if (node.is_placeholder) continue;
                            if (!node.groundtruth) throw DataError("test graph " + g.id + " lacks groundtruth");
                            if (argmax(res.posteriors[i]) == graph::index_of(*node.groundtruth)) ++row.correct;
                          }
                          if (row.total == 0) row.status = "skipped: no evidence nodes";
                        }
                        rows.push_back(std::move(row));
                      });
  sort_rows(rows);
  write_rows(paths.results / "classification.csv", rows);
  write_summary(paths.results / "classification_summary.csv", summarize(c, rows));
  return rows;
}

std::vector<AccuracyRow> run_eval_placeholders(const ExperimentConfig& c, const fs::path& out) {
  const auto paths = output_paths(c, out);
  std::vector<AccuracyRow> rows;
  std::map<std::tuple<std::size_t, int, std::string, int>, json> dumps;
  for_each_prediction(
      c, paths,
      [&](const std::string& m, int level, const std::string& building, const std::string& floor, int k,
          const TopoGraph& g, const NodeResult& res) {
        AccuracyRow row{m, level, building, floor, k, 0, 0, "ok"};
        json nodes = json::array();
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto& node = g.nodes[i];
          if (!node.is_placeholder) continue;
          ++row.total;
          if (!res.error.empty()) continue;
          if (!node.groundtruth) throw DataError("placeholder in " + g.id + " lacks groundtruth");
          const auto label = argmax(res.posteriors[i]);
          if (label == graph::index_of(*node.groundtruth)) ++row.correct;
          nodes.push_back({{"node", node.id},
                           {"groundtruth", std::string(graph::to_code(*node.groundtruth))},
                           {"predicted", std::string(graph::to_code(graph::category_at(label)))},
                           {"posterior", res.posteriors[i]}});
        }
        if (!res.error.empty()) {
          row.status = "error: " + clean_message(res.error);
        } else if (row.total == 0) {
          row.status = "skipped: no placeholders";
          std::cerr << "notice: " << g.id << " has no placeholders, skipped\n";
        } else {
          dumps[{model_rank(m), level, g.id, 0}] = {
              {"model", m}, {"level", level}, {"graph", g.id}, {"building", building}, {"placeholders", nodes}};
        }
        rows.push_back(std::move(row));
      });
  sort_rows(rows);
  write_rows(paths.results / "placeholders.csv", rows);
  write_summary(paths.results / "placeholders_summary.csv", summarize(c, rows));
  json all = json::array();
  for (auto& [key, value] : dumps) all.push_back(std::move(value));
  auto f = open_out(paths.results / "placeholder_marginals.json");
  f << all.dump() << '\n';
  return rows;
}

NoveltyResult run_eval_novelty(const ExperimentConfig& c, const fs::path& out) {
  const auto paths = output_paths(c, out);
  struct Variant {
    const char* name;
    bool novel;
    PlaceCategory a, b;
  };
  const Variant variants[] = {{"original", false, PlaceCategory::k1PO, PlaceCategory::k1PO},
                              {"swap_1PO_2PO", false, PlaceCategory::k1PO, PlaceCategory::k2PO},
                              {"swap_CR_DW", true, PlaceCategory::kCR, PlaceCategory::kDW},
                              {"swap_CR_1PO", true, PlaceCategory::kCR, PlaceCategory::k1PO}};
  NoveltyResult result;
  for (const auto& building : c.dataset.buildings) {
    const Rotation rot = load_rotation(c, paths, building);
    std::cerr << "scoring rotation " << building << '\n';
    for (const auto& g : load_clean_floors(c, paths.data, {building})) {
      std::optional<model::InstanceSpn> instance;
      if (rot.graphspn) instance.emplace(make_instance(c, *rot.graphspn, g, g.id));
      for (const auto& v : variants) {
        const TopoGraph swapped = v.a == v.b ? g : graph::swap_labels(g, v.a, v.b);
        std::vector<std::uint32_t> labels;
        for (const auto& node : swapped.nodes) labels.push_back(graph::index_of(*node.groundtruth));
        for (const auto& m : c.models) {
          double score = 0.0;
          if (m == "graphspn") {
            score = -model::normalized_log_likelihood(*instance, swapped);
          } else {
            score = -mrf::normalized_log_score(mrf::build_mrf(swapped, rot.mrfs.at(m)), labels);
          }
          result.scores.push_back({m, building, g.id, v.name, v.novel, score});
        }
      }
    }
  }
  std::stable_sort(result.scores.begin(), result.scores.end(),
                   [](const NoveltyRow& a, const NoveltyRow& b) { return model_rank(a.model) < model_rank(b.model); });

  auto scores_csv = open_out(paths.results / "novelty_scores.csv");
  scores_csv << "model,building,graph,variant,novel,score\n";
  for (const auto& r : result.scores) {
    scores_csv << r.model << ',' << r.building << ',' << r.graph << ',' << r.variant << ',' << (r.novel ? 1 : 0) << ','
               << fmt_score(r.score) << '\n';
  }
  auto roc_csv = open_out(paths.results / "novelty_roc.csv");
  roc_csv << "model,building,threshold,fpr,tpr\n";
  auto auc_csv = open_out(paths.results / "novelty_auc.csv");
  auc_csv << "model,building,positives,negatives,auc\n";
  for (const auto& m : c.models) {
    std::vector<std::string> names = c.dataset.buildings;
    names.push_back("all");
    for (const auto& b : names) {
      std::vector<double> pos, neg;
      for (const auto& r : result.scores) {
        if (r.model != m || (b != "all" && r.building != b)) continue;
        (r.novel ? pos : neg).push_back(r.score);
      }
      const auto curve = roc_curve(pos, neg);
      const double auc = roc_auc(curve);
      result.aucs.push_back({m, b, auc});
      for (const auto& p : curve) {
        roc_csv << m << ',' << b << ',' << fmt_score(p.threshold) << ',' << fmt(p.fpr) << ',' << fmt(p.tpr) << '\n';
      }
      auc_csv << m << ',' << b << ',' << pos.size() << ',' << neg.size() << ',' << fmt(auc) << '\n';
    }
  }
  return result;
}

}  // namespace graphspn::experiment
