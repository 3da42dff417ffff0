#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "graphspn/spn/inference.hpp"
#include "graphspn/spn/spn.hpp"

namespace graphspn::learn {

enum class LeafInit { kUniform, kFrequency };

struct TrainConfig {
  int max_epochs = 50;
  double rel_loglik_tolerance = 1e-4;
  double count_smoothing = 0.1;
  double prune_epsilon = 1e-4;
  // Sums pick the child with the highest value ignoring their own weights;
  // with weighted selection the first epoch's winner absorbs every sample.
  bool unweighted_selection = true;
  // Starting point for leaf sums (sums over indicators of one variable).
  // kFrequency peaks the j-th leaf sum of each variable at that variable's
  // j-th most frequent training value, cycling, with mass leaf_peak.
  LeafInit leaf_init = LeafInit::kUniform;
  double leaf_peak = 0.9;
  // Seeds the tie-breaking among equally good children.
  std::uint64_t rng_seed = 0;
};

void check(const TrainConfig& config);

using Sample = std::vector<std::uint32_t>;

/// One full-batch hard-EM step. Every sample is observed, the max-induced tree
/// is traced and each sum's chosen child gets one count; afterwards each sum's
/// weights become (count + smoothing) / total. A sum with zero total keeps its
/// weights. Returns the dataset log-likelihood under the weights the epoch
/// started with. Child selection follows options (default: weighted, lowest
/// index wins ties).
double hard_em_epoch(spn::Spn& spn, std::span<const Sample> data, double count_smoothing,
                     const spn::TraceOptions& options = {});

/// Applies the kFrequency leaf initialization in place. Leaf sums are visited
/// in node id order. Values never observed are skipped unless a variable has
/// no observed value at all.
void init_leaf_weights(spn::Spn& spn, std::span<const Sample> data, double peak);

struct TrainResult {
  spn::Spn spn;
  std::vector<double> trace;  // per-epoch log-likelihood before that epoch's update
};

/// Normalizes, applies the leaf initialization, then runs hard-EM epochs until max_epochs or until the
/// relative change of the dataset log-likelihood drops below tolerance.
TrainResult train(spn::Spn spn, std::span<const Sample> data, const TrainConfig& config);

/// CSV with header "epoch,loglik", epochs counted from 1.
void write_trace_csv(std::ostream& out, std::span<const double> trace);

}  // namespace graphspn::learn
