#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "graphtension/allen_cahn.hpp"
#include "graphtension/mbo.hpp"
#include "graphtension/mcf.hpp"

namespace graphtension {

enum class SolverKind { mcf, ac, mbo };

SolverKind parse_solver(const std::string& s);
std::string to_string(SolverKind k);

/// Per-solver knobs; the seeds inside are ignored in favour of run_solver's seed.
struct SolverSettings {
  McfConfig mcf;
  AcConfig ac;
  MboConfig mbo;
};

/// Laplacian eigenpairs of one graph, computed once per requested size.
class SpectrumCache {
 public:
  SpectrumCache(const Graph& g, double tol, std::uint64_t seed) : g_(g), tol_(tol), seed_(seed) {}
  std::shared_ptr<const LaplacianSpectrum> get(int m_eig, LaplacianMetric metric);

 private:
  const Graph& g_;
  double tol_;
  std::uint64_t seed_;
  std::map<std::pair<LaplacianMetric, int>, std::shared_ptr<const LaplacianSpectrum>> cache_;
};

/// Runs one fixed-W solve with the chosen method. `cache`, when given, must
/// belong to `g`.
SolveResult run_solver(SolverKind kind, const SolverSettings& settings, const Graph& g,
                       const DegreeModel& model, const AffinityMatrix& w, int n_hat, std::uint64_t seed,
                       const Partition* initial = nullptr, SpectrumCache* cache = nullptr);

}  // namespace graphtension
