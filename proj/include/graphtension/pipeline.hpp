#pragma once

#include <cstdint>
#include <vector>

#include "graphtension/energy.hpp"
#include "graphtension/graph.hpp"
#include "graphtension/solver.hpp"

namespace graphtension {

struct PipelineConfig {
  int n_hat_expected = 2;
  SolverKind solver = SolverKind::mcf;
  SolverSettings settings;
  double penalty_coeff = 0.1;
  double inf_reset_factor = 1.1;
  int em_max_rounds = 30;
  bool em_rerandomize = false;  // fresh random start for every g-step instead of warm starts
  bool polish = true;           // EM pass on the whole graph after split-merge
  std::uint64_t seed = 0;
};

/// Throws ConfigError for a negative penalty, inf_reset_factor <= 1 or
/// non-positive counts.
void validate(const PipelineConfig& cfg);

/// Q = E + penalty_coeff (n_hat - n_hat_expected)^2 |E|; equals
/// E (1 + penalty_coeff (n_hat - n_hat_expected)^2) for E >= 0.
double penalized_objective(double energy, int n_hat, int n_hat_expected, double penalty_coeff);

struct EmResult {
  Partition partition;
  AffinityMatrix w;  // optimal_w of `partition`, +inf where the cut is empty
  double energy = 0.0;
  std::vector<double> trace;  // energy of every accepted round
  int rounds = 0;
};

/// Alternates the solver's partition step with the closed-form W step,
/// starting from W = 0 on the diagonal and -log(0.1) elsewhere (or from the
/// optimal W of `initial`). Infinite entries are reset to inf_reset_factor times
/// the largest finite entry before the next solve. A round is kept only if it
/// strictly lowers the energy.
EmResult em_fit(const Graph& g, const DegreeModel& model, int n_hat, const PipelineConfig& cfg,
                const Partition* initial = nullptr, SpectrumCache* cache = nullptr);

/// Merges the pair of communities that lowers the penalized objective most,
/// with W re-optimized for every candidate, until no merge helps. The result
/// is compacted to its non-empty communities.
Partition greedy_merge(const Graph& g, const DegreeModel& model, const Partition& p, const PipelineConfig& cfg);

struct DetectResult {
  Partition partition;
  AffinityMatrix w;  // optimal_w of `partition`
  double energy = 0.0;
  double objective = 0.0;       // penalized
  std::vector<double> accepted;  // penalized objective after every accepted split
};

/// Split-merge search from the one-community state. Communities are split by
/// em_fit on their induced subgraph (global degrees), merged greedily, and the
/// result is kept iff the penalized objective strictly decreases. New
/// communities are queued FIFO.
DetectResult split_merge(const Graph& g, const PipelineConfig& cfg);

/// split_merge followed by an EM polish on the whole graph when cfg.polish is set.
DetectResult detect(const Graph& g, const PipelineConfig& cfg);

/// em_fit from scratch with a fixed community count.
DetectResult detect_fixed(const Graph& g, int n_hat, const PipelineConfig& cfg);

/// Kernighan-Lin search on the optimal-W energy: per pass every node moves once,
/// always taking the move with the smallest energy change among unmoved nodes.
/// The pass is rolled back to its best state and kept only if it improves.
Partition kl_baseline(const Graph& g, int n_hat, std::uint64_t seed, int max_passes = 200);

}  // namespace graphtension
