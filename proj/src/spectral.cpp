#include "graphtension/spectral.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "graphtension/error.hpp"
#include "graphtension/random.hpp"

namespace graphtension {

namespace {

// Orthonormal basis grown block by block; Q and LQ share column indices.
class KrylovBasis {
 public:
  KrylovBasis(Eigen::Index n, Eigen::Index capacity, Rng& rng)
      : q_(n, capacity), lq_(n, capacity), rng_(rng) {}

  Eigen::Index cols() const { return cols_; }
  Eigen::Index capacity() const { return q_.cols(); }
  auto q() const { return q_.leftCols(cols_); }
  auto lq() const { return lq_.leftCols(cols_); }
  Eigen::MatrixXd& lq_storage() { return lq_; }
  const Eigen::MatrixXd& q_storage() const { return q_; }

  // Appends the orthonormalized columns of `block`; collapsed columns are
  // refilled with random directions. Returns the number of columns added.
  Eigen::Index append(Eigen::MatrixXd block) {
    const auto n = q_.rows();
    Eigen::Index added = 0;
    std::normal_distribution<double> normal;
    for (Eigen::Index c = 0; c < block.cols() && cols_ < capacity() && cols_ < n; ++c) {
      Eigen::VectorXd v = block.col(c);
      bool ok = orthonormalize(v);
      for (int attempt = 0; !ok && attempt < 3; ++attempt) {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng_);
        ok = orthonormalize(v);
      }
      if (!ok) break;
      q_.col(cols_++) = v;
      ++added;
    }
    return added;
  }

 private:
  bool orthonormalize(Eigen::VectorXd& v) const {
    const double start = v.norm();
    if (start == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (cols_ > 0) v -= q_.leftCols(cols_) * (q_.leftCols(cols_).transpose() * v);
    }
    const double end = v.norm();
    if (end <= 1e-10 * start) return false;
    v /= end;
    return true;
  }

  Eigen::MatrixXd q_, lq_;
  Eigen::Index cols_ = 0;
  Rng& rng_;
};

// Smallest eigenpairs of the symmetric positive semidefinite matrix `op`.
LaplacianSpectrum krylov_smallest(const Eigen::SparseMatrix<double>& op, int m_eig, const EigenSolverOptions& opts) {
  const Eigen::Index n = op.rows();

  Rng rng(opts.seed);
  std::normal_distribution<double> normal;
  const Eigen::Index block = std::min<Eigen::Index>(n, m_eig + std::max(4, m_eig / 2));
  const Eigen::Index capacity = std::min<Eigen::Index>(n, std::max<Eigen::Index>(6 * block, block + 60));

  // Krylov directions come from (L + shift I)^{-1}, which spreads the low end of
  // the spectrum; Rayleigh-Ritz and residuals use L itself. Without a usable
  // factorization the directions come from L.
  const double shift = 1e-3 * std::max(1.0, op.diagonal().mean());
  Eigen::SparseMatrix<double> shifted = op;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  const bool inverted = factor.info() == Eigen::Success;
  auto expand = [&](const Eigen::MatrixXd& q, const Eigen::MatrixXd& lq) -> Eigen::MatrixXd {
    if (!inverted) return lq;
    return factor.solve(q);
  };

  Eigen::MatrixXd x(n, block);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);

  double best_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    KrylovBasis basis(n, capacity, rng);
    Eigen::Index start = 0;
    Eigen::Index added = basis.append(x);
    while (added > 0) {
      basis.lq_storage().middleCols(start, added) =
          op * basis.q_storage().middleCols(start, added);
      if (basis.cols() >= capacity) break;
      const Eigen::Index take = std::min<Eigen::Index>(added, capacity - basis.cols());
      Eigen::MatrixXd next = expand(basis.q_storage().middleCols(start, take),
                                    basis.lq_storage().middleCols(start, take));
      start = basis.cols();
      added = basis.append(std::move(next));
    }

    const auto k = basis.cols();
    Eigen::MatrixXd h = basis.q().transpose() * basis.lq();
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::Index keep = std::min<Eigen::Index>(block, k);
    const Eigen::MatrixXd s = es.eigenvectors().leftCols(keep);
    Eigen::MatrixXd y = basis.q() * s;
    const Eigen::MatrixXd ly = basis.lq() * s;
    const Eigen::VectorXd theta = es.eigenvalues().head(keep);

    double worst = 0.0;
    for (int j = 0; j < m_eig; ++j)
      worst = std::max(worst, (ly.col(j) - theta[j] * y.col(j)).norm());
    best_residual = std::min(best_residual, worst);
    if (worst <= opts.tol) {
      LaplacianSpectrum out;
      out.values = theta.head(m_eig);
      out.vectors = y.leftCols(m_eig);
      return out;
    }
    x = std::move(y);
  }
  throw ConvergenceError("smallest_eigenpairs did not converge", best_residual);
}

}  // namespace

LaplacianMetric parse_metric(const std::string& s) {
  if (s == "degree") return LaplacianMetric::degree;
  if (s == "identity") return LaplacianMetric::identity;
  throw ConfigError("unknown metric '" + s + "' (expected degree or identity)");
}

std::string to_string(LaplacianMetric m) { return m == LaplacianMetric::identity ? "identity" : "degree"; }

Eigen::VectorXd metric_mass(const Graph& g, LaplacianMetric metric) {
  Eigen::VectorXd mass = Eigen::VectorXd::Ones(g.n_nodes());
  if (metric == LaplacianMetric::degree)
    for (NodeId i = 0; i < g.n_nodes(); ++i)
      if (g.degree(i) > 0) mass[i] = g.degree(i);
  return mass;
}

LaplacianSpectrum smallest_eigenpairs(const Graph& g, int m_eig, const EigenSolverOptions& opts,
                                      LaplacianMetric metric) {
  const Eigen::Index n = g.n_nodes();
  if (m_eig < 1 || m_eig > n) throw ContractViolation("smallest_eigenpairs: need 1 <= m_eig <= N");
  Eigen::SparseMatrix<double> op = g.laplacian_matrix();
  const Eigen::VectorXd mass = metric_mass(g, metric);
  if (metric == LaplacianMetric::identity) {
    LaplacianSpectrum out = krylov_smallest(op, m_eig, opts);
    out.mass = mass;
    return out;
  }
  // L v = lambda D v through the symmetric form D^{-1/2} L D^{-1/2}.
  const Eigen::VectorXd inv_sqrt = mass.cwiseSqrt().cwiseInverse();
  op = inv_sqrt.asDiagonal() * op * inv_sqrt.asDiagonal();
  LaplacianSpectrum out = krylov_smallest(op, m_eig, opts);
  out.vectors = inv_sqrt.asDiagonal() * out.vectors;
  out.mass = mass;
  return out;
}

DenseSpectrum sym_eig_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ContractViolation("sym_eig_dense: matrix must be square");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace graphtension
