#include "graphtension/mbo.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "graphtension/error.hpp"

namespace graphtension {

ThresholdRule parse_threshold_rule(const std::string& s) {
  if (s == "sigma-weighted" || s == "sigma_weighted") return ThresholdRule::sigma_weighted;
  if (s == "argmax") return ThresholdRule::argmax;
  throw ConfigError("unknown threshold rule '" + s + "' (expected sigma-weighted or argmax)");
}

std::string to_string(ThresholdRule r) {
  return r == ThresholdRule::argmax ? "argmax" : "sigma-weighted";
}

TimeSteps time_steps_from_eigenvalues(double diff_max, double diff_min, double forcing_max) {
  if (!(diff_max > 0.0) || !(diff_min > 0.0))
    throw DegenerateInputError("mbo: diffusion operator has an all-zero spectrum");
  TimeSteps ts;
  ts.tau = 8.0 / std::sqrt(diff_max * diff_min);
  ts.dt_inner = forcing_max > 0.0 ? 0.9 * 2.0 / forcing_max : ts.tau;
  return ts;
}

TimeSteps estimate_time_steps(const TensionFlow& flow) {
  const auto& ll = flow.laplacian_spectrum().values;
  const auto& ls = flow.sigma_spectrum().values;
  double hi = 0.0;
  for (Eigen::Index i = 0; i < ll.size(); ++i)
    for (Eigen::Index j = 0; j < ls.size(); ++j) hi = std::max(hi, std::abs(ll[i] * ls[j]));
  double lo = kInf;
  const double floor = 1e-10 * hi;
  for (Eigen::Index i = 0; i < ll.size(); ++i)
    for (Eigen::Index j = 0; j < ls.size(); ++j) {
      const double v = std::abs(ll[i] * ls[j]);
      if (v > floor) lo = std::min(lo, v);
    }
  if (hi == 0.0) lo = 0.0;
  double forcing = 0.0;
  if (flow.two_m() > 0.0)
    forcing = (flow.model_degrees().array().square() / flow.mass().array()).sum() / (0.5 * flow.two_m()) *
              flow.coupling_max_eigenvalue();
  return time_steps_from_eigenvalues(hi, lo, forcing);
}

SoftAssignment mbo_diffuse(const TensionFlow& flow, const SoftAssignment& u, double tau, double dt_inner,
                           int max_substeps) {
  if (!(tau > 0.0) || !(dt_inner > 0.0)) throw ConfigError("mbo: tau and dt_inner must be positive");
  // Positive products lambda_L * lambda_sigma are anti-diffusive; keep their pivots away from zero.
  const auto& ll = flow.laplacian_spectrum().values;
  const auto& ls = flow.sigma_spectrum().values;
  const double grow = std::max(0.0, ll.maxCoeff() * ls.maxCoeff());
  double steps = std::ceil(tau / dt_inner - 1e-9);
  steps = std::max(steps, std::ceil(2.0 * tau * grow - 1e-9));
  const int n = static_cast<int>(std::clamp(steps, 1.0, static_cast<double>(std::max(1, max_substeps))));
  const double h = tau / n;
  SoftAssignment v = u;
  for (int s = 0; s < n; ++s) v = flow.implicit_solve(v - h * flow.forcing(v), 1.0, h);
  // e^{-W} with a negative eigenvalue makes the volume forcing anti-damping.
  if (!v.allFinite()) throw NumericalError("mbo: diffusion overflowed");
  return project_rows_to_simplex(std::move(v));
}

Partition mbo_threshold(const SoftAssignment& u, const EliminatedAffinity& e, ThresholdRule rule, Rng& rng) {
  if (!u.allFinite()) throw NumericalError("mbo_threshold: non-finite input");
  const auto n = u.cols();
  Eigen::MatrixXd score;
  if (rule == ThresholdRule::argmax) {
    score = u;
  } else {
    Eigen::MatrixXd s = e.sigma_hat;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (!std::isfinite(s.data()[i])) s.data()[i] = 0.0;
    score = -(u * s);
  }
  std::vector<std::int32_t> labels(static_cast<std::size_t>(u.rows()));
  std::vector<int> ties;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double best = score.row(i).maxCoeff();
    const double tol = 1e-12 * (1.0 + score.row(i).cwiseAbs().maxCoeff());
    ties.clear();
    for (Eigen::Index a = 0; a < n; ++a)
      if (score(i, a) >= best - tol) ties.push_back(static_cast<int>(a));
    if (ties.size() == 1) {
      labels[i] = ties.front();
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
      labels[i] = ties[pick(rng)];
    }
  }
  return Partition(std::move(labels), static_cast<int>(n));
}

SolveResult mbo_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                    const MboConfig& cfg, const Partition* initial,
                    std::shared_ptr<const LaplacianSpectrum> spectrum) {
  if (n_hat < 1) throw ContractViolation("mbo_run: n_hat must be >= 1");
  if (w.size() != n_hat) throw ContractViolation("mbo_run: affinity size mismatch");
  if (cfg.outer_steps < 1) throw ConfigError("mbo: outer_steps must be >= 1");
  SolveResult out;
  Rng rng(cfg.seed);
  if (n_hat == 1) {
    out.partition = Partition::single(g.n_nodes());
    out.energy = energy(g, model, out.partition, w);
    out.trace = {out.energy};
    out.converged = true;
    return out;
  }
  if (!spectrum) {
    EigenSolverOptions eo;
    eo.tol = cfg.eig_tol;
    eo.seed = derive_seed(cfg.seed, 1);
    spectrum = std::make_shared<const LaplacianSpectrum>(
        smallest_eigenpairs(g, resolve_m_eig(cfg.m_eig, n_hat, g.n_nodes()), eo, cfg.metric));
  }
  const TensionFlow flow(g, model, w, std::move(spectrum), cfg.w_cap);
  TimeSteps ts{cfg.tau, cfg.dt_inner};
  if (ts.tau <= 0.0 || ts.dt_inner <= 0.0) {
    const TimeSteps est = estimate_time_steps(flow);
    if (ts.tau <= 0.0) ts.tau = est.tau;
    if (ts.dt_inner <= 0.0) ts.dt_inner = est.dt_inner;
  }

  Partition current = initial ? *initial : Partition::uniform_random(g.n_nodes(), n_hat, rng);
  if (current.n_hat() != n_hat || current.size() != static_cast<std::size_t>(g.n_nodes()))
    throw ContractViolation("mbo_run: initial partition does not match");
  out.partition = current;
  out.energy = energy(g, model, current, w);
  out.trace.push_back(out.energy);
  for (int it = 0; it < cfg.outer_steps; ++it) {
    SoftAssignment u;
    try {
      u = mbo_diffuse(flow, indicator_matrix(current), ts.tau, ts.dt_inner, cfg.max_inner_substeps);
    } catch (const NumericalError& e) {
      spdlog::debug("mbo_run: {} after {} steps; keeping the best partition", e.what(), it);
      break;
    }
    Partition next = mbo_threshold(u, flow.eliminated(), cfg.threshold_rule, rng);
    ++out.iterations;
    const double e = energy(g, model, next, w);
    out.trace.push_back(e);
    if (e < out.energy) {
      out.energy = e;
      out.partition = next;
    }
    if (next == current) {
      out.converged = true;
      break;
    }
    current = std::move(next);
  }
  return out;
}

}  // namespace graphtension
