#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "graphtension/allen_cahn.hpp"

namespace graphtension {

enum class ThresholdRule {
  sigma_weighted,  // g_i = argmin_a sum_b sigma_hat(a,b) U(i,b)
  argmax,          // g_i = argmax_a U(i,a)
};

ThresholdRule parse_threshold_rule(const std::string& s);
std::string to_string(ThresholdRule r);

struct MboConfig {
  LaplacianMetric metric = LaplacianMetric::degree;
  int outer_steps = 100;
  double tau = 0.0;       // 0 selects the spectral estimate
  double dt_inner = 0.0;  // 0 selects the spectral estimate
  ThresholdRule threshold_rule = ThresholdRule::sigma_weighted;
  int m_eig = 0;
  double eig_tol = 1e-7;
  double w_cap = 50.0;
  int max_inner_substeps = 2000;
  std::uint64_t seed = 0;
};

struct TimeSteps {
  double tau = 0.0;
  double dt_inner = 0.0;
};

/// tau = 8 / sqrt(diff_max * diff_min) and dt_inner = 0.9 * 2 / forcing_max.
/// A zero forcing_max gives dt_inner = tau. Throws DegenerateInputError when
/// diff_max or diff_min is not positive.
TimeSteps time_steps_from_eigenvalues(double diff_max, double diff_min, double forcing_max);

/// Estimates from the retained products |lambda_L * lambda_sigma| (smallest
/// nonzero one for diff_min) and (k^T M^{-1} k / m) * lambda_max(exp(-W)).
TimeSteps estimate_time_steps(const TensionFlow& flow);

/// Integrates M U_t = L U sigma - M forcing(U) for time tau in equal substeps no
/// longer than dt_inner: the diffusion semi-implicitly, the forcing explicitly.
/// Rows are projected onto the simplex at the end. Throws NumericalError if
/// the iterate overflows.
SoftAssignment mbo_diffuse(const TensionFlow& flow, const SoftAssignment& u, double tau, double dt_inner,
                           int max_substeps = 2000);

Partition mbo_threshold(const SoftAssignment& u, const EliminatedAffinity& e, ThresholdRule rule, Rng& rng);

/// Diffuse/threshold from a random (or the given) partition until a fixed
/// point, outer_steps, or an overflowing diffusion. Returns the lowest-energy
/// partition seen; `trace` holds the exact energy after every threshold.
SolveResult mbo_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                    const MboConfig& cfg, const Partition* initial = nullptr,
                    std::shared_ptr<const LaplacianSpectrum> spectrum = nullptr);

}  // namespace graphtension
