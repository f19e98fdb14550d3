#pragma once

#include <vector>

#include "graphtension/graph.hpp"

namespace graphtension {

/// Output of one fixed-W solver run.
struct SolveResult {
  Partition partition;
  double energy = 0.0;        // exact surface-tension energy of `partition` under the input W
  std::vector<double> trace;  // per-iteration monitor (solver specific)
  int iterations = 0;
  bool converged = false;
};

}  // namespace graphtension
