#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphspn/common/errors.hpp"
#include "graphspn/experiment/config.hpp"
#include "graphspn/experiment/dot.hpp"
#include "graphspn/experiment/pipeline.hpp"

namespace fs = std::filesystem;
using namespace graphspn;

namespace {

constexpr int kConfigError = 2;
constexpr int kDataError = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string models;
  std::string levels;
  std::string graph;
  std::string posteriors;
};

experiment::ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  auto cfg = experiment::load_experiment_config(o.config);
  if (o.seed) experiment::apply_seed(cfg, *o.seed);
  if (!o.models.empty()) cfg.models = experiment::parse_models(o.models);
  if (!o.levels.empty()) cfg.levels = experiment::parse_levels(o.levels);
  experiment::check(cfg);
  return cfg;
}

void export_dot(const Options& o, bool out_given) {
  if (o.graph.empty()) throw ConfigError("export-dot needs --graph <graph.json>");
  const auto g = graph::load_graph(o.graph);
  experiment::PosteriorMap post;
  if (!o.posteriors.empty()) {
    std::ifstream in(o.posteriors);
    if (!in) throw DataError("cannot read " + o.posteriors);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("malformed JSON in " + o.posteriors + ": " + e.what());
    }
    post = experiment::posteriors_from_json(doc);
  }
  const std::string dot = experiment::to_dot(g, post);
  if (!out_given) {
    std::cout << dot;
    return;
  }
  std::error_code ec;
  fs::create_directories(o.out, ec);
  const fs::path path = fs::path(o.out) / (g.id + ".dot");
  std::ofstream f(path);
  if (!f || !(f << dot)) throw DataError("cannot write " + path.string());
  std::cerr << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-structured sum-product networks for semantic place inference on topological maps"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed, overrides the config");
  auto* out_opt = app.add_option("--out", o.out, "Working directory for data, models and results")->capture_default_str();
  app.add_option("--config", o.config, "Experiment config (JSON)");
  app.add_option("--models", o.models, "Comma-separated subset of graphspn,mrf2,mrf3");
  app.add_option("--levels", o.levels, "Noise levels, e.g. 1..6 or 2,5");

  auto* gen = app.add_subcommand("gen", "Generate synthetic floors and noisy test graphs");
  auto* train = app.add_subcommand("train", "Train GraphSPN and MRF models for every building rotation");
  auto* eval_class = app.add_subcommand("eval-class", "Classification accuracy on nodes with evidence");
  auto* eval_ph = app.add_subcommand("eval-placeholders", "Classification accuracy on placeholders");
  auto* eval_nov = app.add_subcommand("eval-novelty", "Novelty detection ROC and AUC");
  auto* dot = app.add_subcommand("export-dot", "Write a graph as DOT, optionally with posteriors");
  dot->add_option("--graph", o.graph, "Graph JSON file")->required();
  dot->add_option("--posteriors", o.posteriors, "Posterior JSON (node id -> 10 probabilities)");
  for (auto* sub : {gen, train, eval_class, eval_ph, eval_nov, dot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  if (seed_opt->count() > 0) o.seed = seed;

  try {
    if (*dot) {
      export_dot(o, out_opt->count() > 0);
      return 0;
    }
    const auto cfg = load(o);
    const fs::path out(o.out);
    if (*gen) {
      experiment::run_gen(cfg, out);
    } else if (*train) {
      experiment::run_train(cfg, out);
    } else if (*eval_class) {
      const auto rows = experiment::run_eval_class(cfg, out);
      std::cerr << rows.size() << " rows written\n";
    } else if (*eval_ph) {
      const auto rows = experiment::run_eval_placeholders(cfg, out);
      std::cerr << rows.size() << " rows written\n";
    } else if (*eval_nov) {
      for (const auto& a : experiment::run_eval_novelty(cfg, out).aucs) {
        if (a.building == "all") std::cerr << a.model << " AUC " << a.auc << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
