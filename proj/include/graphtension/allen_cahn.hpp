#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "graphtension/energy.hpp"
#include "graphtension/graph.hpp"
#include "graphtension/solve_result.hpp"
#include "graphtension/spectral.hpp"

namespace graphtension {

/// N x n_hat soft assignment; rows live on the probability simplex after projection.
using SoftAssignment = Eigen::MatrixXd;

/// Multiwell potential T(U) = sum_i prod_a (1/4) ||U_i - e_a||_1^2.
double multiwell(const SoftAssignment& u);
/// Gradient of T with sign(0) = 0 for the l1 subgradient.
SoftAssignment multiwell_grad(const SoftAssignment& u);

/// Euclidean projection of every row onto the probability simplex.
SoftAssignment project_rows_to_simplex(SoftAssignment u);

/// Graph Ginzburg-Landau energy of the surface-tension problem:
///   sum_{a,b} [ -sigma(a,b) U_a^T L U_b + (k^T U_a) exp(-W(a,b)) (k^T U_b) / 2m ]
///   + sum_a W(a,a) (d^T U_a) + T(U) / (2 epsilon),
/// where L and d are the Laplacian and degrees of `g` and k, 2m come from `model`.
/// For a partition matrix this equals the exact energy for any finite W.
double gl_energy(const Graph& g, const DegreeModel& model, const SoftAssignment& u,
                 const EliminatedAffinity& e, double epsilon);

/// Pieces of the surface-tension drift
///   M U_t = L U sigma - (1/2m) k k^T U exp(-W) - d diag(W)^T
/// shared by the Allen-Cahn and MBO solvers, with infinite W entries capped.
///
/// M = diag(mass) is the metric of the Laplacian spectrum. Since rows of U
/// sum to one, L U sigma = L U (P sigma P) with P = I - 11^T / n_hat, and the
/// diffusion uses the latter, which leaves row sums alone.
class TensionFlow {
 public:
  TensionFlow(const Graph& g, const DegreeModel& model, const AffinityMatrix& w,
              std::shared_ptr<const LaplacianSpectrum> laplacian, double w_cap);

  const Graph& graph() const { return g_; }
  const EliminatedAffinity& eliminated() const { return elim_; }
  const LaplacianSpectrum& laplacian_spectrum() const { return *lap_; }
  /// Spectrum of P sigma P.
  const DenseSpectrum& sigma_spectrum() const { return sigma_spec_; }
  const Eigen::VectorXd& mass() const { return lap_->mass; }
  const Eigen::VectorXd& model_degrees() const { return k_; }
  double two_m() const { return two_m_; }
  /// Largest eigenvalue of exp(-W).
  double coupling_max_eigenvalue() const { return coupling_max_; }

  /// M^{-1} [(1/2m) k (k^T U) exp(-W) + d diag(W)^T]: the explicit volume forcing.
  Eigen::MatrixXd forcing(const SoftAssignment& u) const;

  /// Solves  shift * X - dt * M^{-1} L X (P sigma P) = rhs  with L replaced by
  /// its retained eigenpairs; components outside span(V_L) are discarded.
  /// Throws ConfigError when a pivot vanishes.
  Eigen::MatrixXd implicit_solve(const Eigen::MatrixXd& rhs, double shift, double dt) const;

  /// Largest |lambda_L * lambda_sigma| over retained pairs.
  double max_diffusion_eigenvalue() const;

 private:
  const Graph& g_;
  Eigen::VectorXd k_;
  Eigen::VectorXd d_;
  Eigen::VectorXd inv_mass_;
  double two_m_;
  EliminatedAffinity elim_;
  Eigen::MatrixXd coupling_;
  double coupling_max_ = 0.0;
  std::shared_ptr<const LaplacianSpectrum> lap_;
  DenseSpectrum sigma_spec_;
};

struct AcConfig {
  LaplacianMetric metric = LaplacianMetric::degree;
  double epsilon = 0.004;
  double dt = 0.0;  // 0 selects 1 / (1 + max |lambda_L lambda_sigma|)
  double c = 0.0;   // 0 selects 2.01 / epsilon
  int max_iters = 500;
  double stop_tol = 1e-4;
  int m_eig = 0;  // 0 selects min(2 n_hat, N)
  double eig_tol = 1e-7;
  double w_cap = 50.0;
  std::uint64_t seed = 0;
};

/// Resolves the automatic dt and c of `cfg` for `flow`. Throws ConfigError
/// for epsilon <= 0 or c <= 2 / epsilon.
AcConfig resolve_ac_config(const TensionFlow& flow, AcConfig cfg);

/// One convex-splitting step:
///   (1 + c dt) U' - dt M^{-1} L U' sigma = U + dt (c U - forcing(U) - M^{-1} T'(U) / epsilon),
/// solved pseudospectrally, then projected row-wise onto the simplex.
SoftAssignment ac_step(const TensionFlow& flow, const SoftAssignment& u, const AcConfig& resolved);

/// Allen-Cahn descent from a random row-stochastic start (or the given
/// partition), rounded by row argmax. `trace` holds gl_energy per iteration.
SolveResult ac_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                   const AcConfig& cfg, const Partition* initial = nullptr,
                   std::shared_ptr<const LaplacianSpectrum> spectrum = nullptr);

/// Row argmax with uniformly random tie breaking.
Partition round_rows(const SoftAssignment& u, Rng& rng);

/// Default retained eigenpair count min(2 n_hat, N) unless `requested` > 0.
int resolve_m_eig(int requested, int n_hat, NodeId n_nodes);

}  // namespace graphtension
