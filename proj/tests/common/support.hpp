#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "graphtension/graph.hpp"
#include "graphtension/spectral.hpp"

namespace gt_test {

using namespace graphtension;

inline Graph make_graph(NodeId n, std::vector<Edge> edges) { return Graph::from_edges(n, edges); }

inline Graph k3() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

inline Graph two_k3() { return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

inline Graph path3() { return make_graph(3, {{0, 1}, {1, 2}}); }

// G(n, p) without isolated-node repair.
inline Graph random_graph(NodeId n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  return Graph::from_edges(n, edges);
}

inline Partition random_partition(NodeId n, int n_hat, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, n_hat - 1);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = pick(rng);
  return Partition(std::move(labels), n_hat);
}

inline Eigen::MatrixXd random_symmetric(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) m(a, b) = m(b, a) = u(rng);
  return m;
}

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n_nodes(), g.n_nodes());
  for (auto [i, j] : g.edges()) a(i, j) = a(j, i) = 1.0;
  return a;
}

inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::MatrixXd l = -a;
  for (NodeId i = 0; i < g.n_nodes(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

// Energy by direct summation over ordered node pairs and community pairs.
inline double oracle_energy(const Graph& g, const Partition& p, const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  const int n_hat = p.n_hat();
  Eigen::MatrixXd cut = Eigen::MatrixXd::Zero(n_hat, n_hat);
  Eigen::VectorXd vol = Eigen::VectorXd::Zero(n_hat);
  double two_m = 0.0;
  for (NodeId i = 0; i < g.n_nodes(); ++i)
    for (NodeId j = 0; j < g.n_nodes(); ++j) {
      cut(p[i], p[j]) += a(i, j);
      vol(p[i]) += a(i, j);
      two_m += a(i, j);
    }
  double e = 0.0;
  for (int x = 0; x < n_hat; ++x)
    for (int y = 0; y < n_hat; ++y) {
      if (cut(x, y) > 0.0) e += w(x, y) * cut(x, y);
      if (std::isfinite(w(x, y))) e += std::exp(-w(x, y)) * vol(x) * vol(y) / two_m;
    }
  return e;
}

// Every assignment of n nodes to n_hat labels, as label vectors.
inline std::vector<Partition> all_partitions(NodeId n, int n_hat) {
  std::vector<Partition> out;
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n), 0);
  while (true) {
    out.emplace_back(labels, n_hat);
    std::size_t i = 0;
    while (i < labels.size() && ++labels[i] == n_hat) labels[i++] = 0;
    if (i == labels.size()) break;
  }
  return out;
}

// True when a and b group the nodes identically up to relabeling.
inline bool same_grouping(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

// Sort-based simplex projection: largest support whose threshold stays below its last entry.
inline Eigen::RowVectorXd simplex_oracle(const Eigen::RowVectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    cum += s[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (s[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0);
}

inline Eigen::MatrixXd project_rows_oracle(Eigen::MatrixXd u) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) u.row(i) = simplex_oracle(u.row(i));
  return u;
}

inline Eigen::MatrixXd random_stochastic(int n, int c, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(n, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  for (int i = 0; i < n; ++i) m.row(i) /= m.row(i).sum();
  return m;
}

// Every eigenpair of L v = lambda M v, so pseudospectral solves are exact.
inline std::shared_ptr<const LaplacianSpectrum> full_spectrum(const Graph& g, const Eigen::VectorXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g), Eigen::MatrixXd(mass.asDiagonal()));
  auto s = std::make_shared<LaplacianSpectrum>();
  s->values = es.eigenvalues();
  s->vectors = es.eigenvectors();
  s->mass = mass;
  return s;
}

// M^{-1} [k (k^T U) exp(-W) / 2m + k diag(W)^T] on a whole graph.
inline Eigen::MatrixXd dense_forcing(const Graph& g, const Eigen::VectorXd& mass, const Eigen::MatrixXd& w,
                                     const Eigen::MatrixXd& u) {
  Eigen::VectorXd k(g.n_nodes());
  for (NodeId i = 0; i < g.n_nodes(); ++i) k(i) = g.degree(i);
  const Eigen::MatrixXd omega = (-w.array()).exp().matrix();
  const Eigen::MatrixXd f = k * (k.transpose() * u) * omega / g.two_m() + k * w.diagonal().transpose();
  return mass.cwiseInverse().asDiagonal() * f;
}

// Solves shift X - dt M^{-1} L X (P s P) = rhs by a dense Kronecker system, s the
// diagonal-eliminated W and P the centering projector.
inline Eigen::MatrixXd dense_implicit(const Graph& g, const Eigen::VectorXd& mass, const Eigen::MatrixXd& w,
                                      const Eigen::MatrixXd& rhs, double shift, double dt) {
  const int n = g.n_nodes(), h = static_cast<int>(w.rows());
  Eigen::MatrixXd sigma(h, h);
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) sigma(a, b) = w(a, b) - 0.5 * w(a, a) - 0.5 * w(b, b);
  const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(h, h) - Eigen::MatrixXd::Constant(h, h, 1.0 / h);
  const Eigen::MatrixXd s = p * sigma * p;
  const Eigen::MatrixXd op = mass.cwiseInverse().asDiagonal() * dense_laplacian(g);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * h, n * h);
  for (int a = 0; a < h; ++a)
    for (int b = 0; b < h; ++b) {
      big.block(a * n, b * n, n, n) = -dt * s(b, a) * op;
      if (a == b) big.block(a * n, a * n, n, n) += shift * Eigen::MatrixXd::Identity(n, n);
    }
  const Eigen::VectorXd x = big.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * h));
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), n, h);
}

}  // namespace gt_test
