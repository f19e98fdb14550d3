#pragma once

#include <cstdint>

#include "graphtension/energy.hpp"
#include "graphtension/graph.hpp"
#include "graphtension/random.hpp"
#include "graphtension/solve_result.hpp"

namespace graphtension {

enum class McfMode {
  simultaneous,  // every node picks its best label against the start-of-step partition
  serial,        // random visiting order, statistics updated after each move
};

struct McfConfig {
  int max_iters = 500;
  bool serial_mode = false;
  std::uint64_t seed = 0;
};

/// One graph mean-curvature-flow step.
///
/// Each node moves to argmin_a move_delta(i, a). Ties keep the current label
/// when it is among the minimizers and are broken uniformly at random otherwise.
Partition mcf_step(const Graph& g, const DegreeModel& model, const Partition& p,
                   const AffinityMatrix& w, McfMode mode, Rng& rng);

/// Iterates mcf_step from a uniformly random (or the given) partition until no
/// label changes or max_iters. `trace` holds the energy before the first step
/// and after every step. A 2-cycle in simultaneous mode triggers one serial sweep.
SolveResult mcf_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                    const McfConfig& cfg, const Partition* initial = nullptr);

}  // namespace graphtension
