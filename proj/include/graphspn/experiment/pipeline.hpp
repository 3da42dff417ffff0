#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "graphspn/experiment/config.hpp"

namespace graphspn::experiment {

struct OutputPaths {
  std::filesystem::path data;
  std::filesystem::path models;
  std::filesystem::path results;
};

// data_dir, model_dir and results_dir resolved against `out`.
OutputPaths output_paths(const ExperimentConfig& config, const std::filesystem::path& out);

// Generates the synthetic dataset under <data>.
void run_gen(const ExperimentConfig& config, const std::filesystem::path& out);

// One rotation per building: the building is held out, the selected models
// are trained on all floors of the others and written to <models>/<building>/
// with a manifest listing the training floors.
void run_train(const ExperimentConfig& config, const std::filesystem::path& out);

struct AccuracyRow {
  std::string model;
  int level = 0;
  std::string building;
  std::string graph;  // floor id
  int evidence_set = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::string status = "ok";  // "ok", "skipped: ..." or "error: ..."
};

struct AccuracySummary {
  std::string model;
  int level = 0;
  std::string building;  // "all" pools every rotation
  std::size_t graphs = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double pooled_accuracy = 0.0;  // total correct / total counted nodes
};

// Mean and population std over the "ok" rows of each (model, level,
// building), plus building "all". Sorted like the rows.
std::vector<AccuracySummary> summarize(const ExperimentConfig& config, const std::vector<AccuracyRow>& rows);

// Accuracy over non-placeholder nodes of every test graph. Writes
// classification.csv and classification_summary.csv under <results>.
std::vector<AccuracyRow> run_eval_class(const ExperimentConfig& config, const std::filesystem::path& out);

// Accuracy over placeholder nodes only. Writes placeholders.csv,
// placeholders_summary.csv and placeholder_marginals.json under <results>.
std::vector<AccuracyRow> run_eval_placeholders(const ExperimentConfig& config, const std::filesystem::path& out);

struct NoveltyRow {
  std::string model;
  std::string building;
  std::string graph;
  std::string variant;  // original, swap_1PO_2PO, swap_CR_DW, swap_CR_1PO
  bool novel = false;
  double score = 0.0;  // higher means more novel
};

struct NoveltyAuc {
  std::string model;
  std::string building;  // or "all"
  double auc = 0.0;
};

struct NoveltyResult {
  std::vector<NoveltyRow> scores;
  std::vector<NoveltyAuc> aucs;
};

// Scores clean test floors and their label-swapped variants. The score is
// the negated per-node log-likelihood (GraphSPN) or negated per-node
// unnormalized log score (MRF). Writes novelty_scores.csv, novelty_roc.csv
// and novelty_auc.csv under <results>.
NoveltyResult run_eval_novelty(const ExperimentConfig& config, const std::filesystem::path& out);

}  // namespace graphspn::experiment
