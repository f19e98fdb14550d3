#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "graphtension/graph.hpp"

namespace graphtension {

/// Inner product in which Laplacian eigenvectors are orthonormal.
enum class LaplacianMetric {
  identity,  // L v = lambda v
  degree,    // L v = lambda D v, D = diag(k) with isolated nodes given mass 1
};

LaplacianMetric parse_metric(const std::string& s);
std::string to_string(LaplacianMetric m);

/// The m smallest eigenpairs of the combinatorial Laplacian L = diag(k) - A,
/// orthonormal with respect to diag(mass): V^T diag(mass) V = I.
struct LaplacianSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // N x m
  Eigen::VectorXd mass;     // all ones for the identity metric
};

/// Full decomposition M = V diag(values) V^T of a small symmetric matrix.
struct DenseSpectrum {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors;
};

struct EigenSolverOptions {
  double tol = 1e-8;  // residual bound ||S y - lambda y|| for unit y, S = D^{-1/2} L D^{-1/2}
  int max_restarts = 500;
  std::uint64_t seed = 0x5eed;
};

/// Block Krylov iteration on the shift-inverted operator with full
/// reorthogonalization and restarts from the current Ritz vectors.
///
/// Repeated eigenvalues are handled by the block width (which exceeds m), and
/// by refilling rank-deficient blocks with fresh random directions.
/// Throws ConvergenceError when the restart budget runs out.
LaplacianSpectrum smallest_eigenpairs(const Graph& g, int m_eig, const EigenSolverOptions& opts = {},
                                      LaplacianMetric metric = LaplacianMetric::identity);

/// Diagonal of the metric: ones, or degrees with zeros replaced by 1.
Eigen::VectorXd metric_mass(const Graph& g, LaplacianMetric metric);

/// Symmetrizes (M + M^T)/2 and decomposes it.
DenseSpectrum sym_eig_dense(const Eigen::MatrixXd& m);

}  // namespace graphtension
