#pragma once

#include <string>
#include <vector>

#include "graphtension/pipeline.hpp"
#include "graphtension/result.hpp"

namespace graphtension {

enum class DetectMode {
  split_merge,  // split-merge search over community counts, then EM polish
  fixed,        // EM with n_hat fixed
};

DetectMode parse_detect_mode(const std::string& s);
std::string to_string(DetectMode m);

struct ExperimentConfig {
  PipelineConfig pipeline;
  DetectMode mode = DetectMode::split_merge;
  int n_hat = 2;  // community count for DetectMode::fixed
};

struct ExperimentOutput {
  RunResult result;
  Partition partition;
};

/// Energy, optimal W, and (given a reference) score and NMI of `p`.
/// Energies are taken at each partition's own optimal W.
RunResult evaluate_partition(const Graph& g, const Partition& p, const Partition* reference);

/// Detects communities in `g` and evaluates them against `reference` if given.
/// Deterministic for a fixed configuration except for runtime_s.
ExperimentOutput run_experiment(const Graph& g, const Partition* reference, const ExperimentConfig& cfg);

/// Runs `trials` experiments with seeds derive_seed(cfg.pipeline.seed, t) on at
/// most `workers` threads. Results are in trial order.
std::vector<ExperimentOutput> run_batch(const Graph& g, const Partition* reference, const ExperimentConfig& cfg,
                                        int trials, int workers);

/// Parameter echo for a configuration.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace graphtension
