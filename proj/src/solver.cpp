#include "graphtension/solver.hpp"

#include "graphtension/error.hpp"

namespace graphtension {

SolverKind parse_solver(const std::string& s) {
  if (s == "mcf") return SolverKind::mcf;
  if (s == "ac") return SolverKind::ac;
  if (s == "mbo") return SolverKind::mbo;
  throw ConfigError("unknown solver '" + s + "' (expected mcf, ac or mbo)");
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::mcf: return "mcf";
    case SolverKind::ac: return "ac";
    case SolverKind::mbo: return "mbo";
  }
  return "mcf";
}

std::shared_ptr<const LaplacianSpectrum> SpectrumCache::get(int m_eig, LaplacianMetric metric) {
  const std::pair key{metric, m_eig};
  auto it = cache_.lower_bound(key);
  if (it != cache_.end() && it->first.first == metric) {
    if (it->first.second == m_eig) return it->second;
    auto head = std::make_shared<LaplacianSpectrum>();
    head->values = it->second->values.head(m_eig);
    head->vectors = it->second->vectors.leftCols(m_eig);
    head->mass = it->second->mass;
    return cache_[key] = std::move(head);
  }
  EigenSolverOptions eo;
  eo.tol = tol_;
  eo.seed = seed_;
  auto spec = std::make_shared<const LaplacianSpectrum>(smallest_eigenpairs(g_, m_eig, eo, metric));
  return cache_[key] = std::move(spec);
}

SolveResult run_solver(SolverKind kind, const SolverSettings& settings, const Graph& g,
                       const DegreeModel& model, const AffinityMatrix& w, int n_hat, std::uint64_t seed,
                       const Partition* initial, SpectrumCache* cache) {
  switch (kind) {
    case SolverKind::mcf: {
      McfConfig cfg = settings.mcf;
      cfg.seed = seed;
      return mcf_run(g, model, w, n_hat, cfg, initial);
    }
    case SolverKind::ac: {
      AcConfig cfg = settings.ac;
      cfg.seed = seed;
      std::shared_ptr<const LaplacianSpectrum> spec;
      if (cache && n_hat > 1) spec = cache->get(resolve_m_eig(cfg.m_eig, n_hat, g.n_nodes()), cfg.metric);
      return ac_run(g, model, w, n_hat, cfg, initial, std::move(spec));
    }
    case SolverKind::mbo: {
      MboConfig cfg = settings.mbo;
      cfg.seed = seed;
      std::shared_ptr<const LaplacianSpectrum> spec;
      if (cache && n_hat > 1) spec = cache->get(resolve_m_eig(cfg.m_eig, n_hat, g.n_nodes()), cfg.metric);
      return mbo_run(g, model, w, n_hat, cfg, initial, std::move(spec));
    }
  }
  throw ContractViolation("run_solver: unknown solver");
}

}  // namespace graphtension
