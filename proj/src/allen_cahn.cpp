#include "graphtension/allen_cahn.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <spdlog/spdlog.h>

#include "graphtension/error.hpp"

namespace graphtension {

namespace {

double sign0(double v) { return (v > 0.0) - (v < 0.0); }

// l1 distances from row u to every vertex e_a of the simplex.
void vertex_distances(const Eigen::Ref<const Eigen::RowVectorXd>& u, Eigen::VectorXd& dist) {
  const auto n = u.size();
  const double total = u.cwiseAbs().sum();
  dist.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) dist[a] = total - std::abs(u[a]) + std::abs(u[a] - 1.0);
}

}  // namespace

double multiwell(const SoftAssignment& u) {
  Eigen::VectorXd dist;
  double t = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    vertex_distances(u.row(i), dist);
    double prod = 1.0;
    for (Eigen::Index a = 0; a < dist.size(); ++a) prod *= 0.25 * dist[a] * dist[a];
    t += prod;
  }
  return t;
}

SoftAssignment multiwell_grad(const SoftAssignment& u) {
  const auto n = u.cols();
  SoftAssignment grad = SoftAssignment::Zero(u.rows(), n);
  Eigen::VectorXd dist, f, prefix(n + 1), suffix(n + 1);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    vertex_distances(u.row(i), dist);
    f = 0.25 * dist.array().square();
    prefix[0] = 1.0;
    for (Eigen::Index a = 0; a < n; ++a) prefix[a + 1] = prefix[a] * f[a];
    suffix[n] = 1.0;
    for (Eigen::Index a = n; a-- > 0;) suffix[a] = suffix[a + 1] * f[a];
    for (Eigen::Index a = 0; a < n; ++a) {
      // d f_a / d u_c = (1/2) ||u - e_a||_1 sign(u_c - delta_ac)
      const double others = prefix[a] * suffix[a + 1];
      if (others == 0.0) continue;
      const double scale = 0.5 * dist[a] * others;
      for (Eigen::Index c = 0; c < n; ++c)
        grad(i, c) += scale * sign0(u(i, c) - (c == a ? 1.0 : 0.0));
    }
  }
  return grad;
}

SoftAssignment project_rows_to_simplex(SoftAssignment u) {
  const auto n = u.cols();
  std::vector<double> s(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index a = 0; a < n; ++a) s[a] = u(i, a);
    std::sort(s.begin(), s.end());
    // Chen & Ye: scan thresholds from the largest entries downwards.
    double acc = 0.0;
    double t = 0.0;
    bool found = false;
    for (Eigen::Index j = n - 1; j >= 1; --j) {
      acc += s[j];
      t = (acc - 1.0) / static_cast<double>(n - j);
      if (t >= s[j - 1]) {
        found = true;
        break;
      }
    }
    if (!found) {
      acc += s[0];
      t = (acc - 1.0) / static_cast<double>(n);
    }
    for (Eigen::Index a = 0; a < n; ++a) u(i, a) = std::max(u(i, a) - t, 0.0);
  }
  return u;
}

double gl_energy(const Graph& g, const DegreeModel& model, const SoftAssignment& u,
                 const EliminatedAffinity& e, double epsilon) {
  if (epsilon <= 0.0) throw ConfigError("gl_energy: epsilon must be positive");
  const auto n = u.cols();
  const Eigen::MatrixXd lu = g.multiply_laplacian(u);
  const Eigen::MatrixXd utlu = u.transpose() * lu;
  const Eigen::Map<const Eigen::VectorXd> k(model.degrees.data(), static_cast<Eigen::Index>(model.degrees.size()));
  const Eigen::Map<const Eigen::VectorXd> d(g.degrees().data(), g.n_nodes());
  const Eigen::VectorXd vol = u.transpose() * k;
  const Eigen::VectorXd own_vol = u.transpose() * d;
  const Eigen::MatrixXd coupling = e.volume_coupling();

  double total = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double s = e.sigma_hat(a, b);
      if (utlu(a, b) != 0.0 && s != 0.0) total -= s * utlu(a, b);
      if (model.two_m > 0.0) total += vol[a] * coupling(a, b) * vol[b] / model.two_m;
    }
    total += e.diag_w[a] * own_vol[a];
  }
  return total + multiwell(u) / (2.0 * epsilon);
}

// ---------------------------------------------------------------------------

TensionFlow::TensionFlow(const Graph& g, const DegreeModel& model, const AffinityMatrix& w,
                         std::shared_ptr<const LaplacianSpectrum> laplacian, double w_cap)
    : g_(g), two_m_(model.two_m), lap_(std::move(laplacian)) {
  if (!lap_ || lap_->vectors.rows() != g.n_nodes() || lap_->mass.size() != g.n_nodes())
    throw ContractViolation("TensionFlow: Laplacian spectrum does not match graph");
  inv_mass_ = lap_->mass.cwiseInverse();
  k_ = Eigen::Map<const Eigen::VectorXd>(model.degrees.data(), static_cast<Eigen::Index>(model.degrees.size()));
  d_ = Eigen::Map<const Eigen::VectorXd>(g.degrees().data(), g.n_nodes());
  elim_ = eliminate_diagonal(w.capped(w_cap));
  coupling_ = elim_.volume_coupling();
  coupling_max_ = sym_eig_dense(coupling_).values.maxCoeff();
  const auto n = elim_.sigma_hat.rows();
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  sigma_spec_ = sym_eig_dense(p * elim_.sigma_hat * p);
}

Eigen::MatrixXd TensionFlow::forcing(const SoftAssignment& u) const {
  Eigen::MatrixXd f = d_ * elim_.diag_w.transpose();
  if (two_m_ > 0.0) {
    const Eigen::RowVectorXd vol = k_.transpose() * u;
    f.noalias() += (1.0 / two_m_) * k_ * (vol * coupling_);
  }
  return inv_mass_.asDiagonal() * f;
}

Eigen::MatrixXd TensionFlow::implicit_solve(const Eigen::MatrixXd& rhs, double shift, double dt) const {
  const auto& vl = lap_->vectors;
  const auto& vw = sigma_spec_.vectors;
  Eigen::MatrixXd hat = vl.transpose() * lap_->mass.asDiagonal() * rhs * vw;
  for (Eigen::Index i = 0; i < hat.rows(); ++i)
    for (Eigen::Index j = 0; j < hat.cols(); ++j) {
      const double pivot = shift - dt * lap_->values[i] * sigma_spec_.values[j];
      if (std::abs(pivot) <= 1e-12 * std::abs(shift))
        throw ConfigError("pseudospectral solve hit a zero pivot; use a smaller time step");
      hat(i, j) /= pivot;
    }
  return vl * hat * vw.transpose();
}

double TensionFlow::max_diffusion_eigenvalue() const {
  return lap_->values.cwiseAbs().maxCoeff() * sigma_spec_.values.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

int resolve_m_eig(int requested, int n_hat, NodeId n_nodes) {
  const int m = requested > 0 ? requested : 2 * n_hat;
  return std::clamp(m, 1, std::max(1, static_cast<int>(n_nodes)));
}

AcConfig resolve_ac_config(const TensionFlow& flow, AcConfig cfg) {
  if (!(cfg.epsilon > 0.0)) throw ConfigError("ac: epsilon must be positive");
  if (cfg.c == 0.0) cfg.c = 2.01 / cfg.epsilon;
  if (!(cfg.c > 2.0 / cfg.epsilon)) throw ConfigError("ac: convex splitting needs c > 2 / epsilon");
  if (cfg.dt == 0.0) cfg.dt = 1.0 / (1.0 + flow.max_diffusion_eigenvalue());
  if (!(cfg.dt > 0.0)) throw ConfigError("ac: dt must be positive");
  return cfg;
}

SoftAssignment ac_step(const TensionFlow& flow, const SoftAssignment& u, const AcConfig& cfg) {
  const Eigen::MatrixXd well = flow.mass().cwiseInverse().asDiagonal() * multiwell_grad(u);
  Eigen::MatrixXd rhs = u + cfg.dt * (cfg.c * u - flow.forcing(u) - well / cfg.epsilon);
  return project_rows_to_simplex(flow.implicit_solve(rhs, 1.0 + cfg.c * cfg.dt, cfg.dt));
}

Partition round_rows(const SoftAssignment& u, Rng& rng) {
  std::vector<std::int32_t> labels(static_cast<std::size_t>(u.rows()));
  std::vector<int> ties;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double best = u.row(i).maxCoeff();
    const double tol = 1e-12 * (1.0 + std::abs(best));
    ties.clear();
    for (Eigen::Index a = 0; a < u.cols(); ++a)
      if (u(i, a) >= best - tol) ties.push_back(static_cast<int>(a));
    if (ties.size() == 1) {
      labels[i] = ties.front();
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
      labels[i] = ties[pick(rng)];
    }
  }
  return Partition(std::move(labels), static_cast<int>(u.cols()));
}

SolveResult ac_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                   const AcConfig& cfg, const Partition* initial,
                   std::shared_ptr<const LaplacianSpectrum> spectrum) {
  if (n_hat < 1) throw ContractViolation("ac_run: n_hat must be >= 1");
  if (w.size() != n_hat) throw ContractViolation("ac_run: affinity size mismatch");
  SolveResult out;
  Rng rng(cfg.seed);
  if (n_hat == 1) {
    out.partition = Partition::single(g.n_nodes());
    out.energy = energy(g, model, out.partition, w);
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
  const AcConfig rc = resolve_ac_config(flow, cfg);

  SoftAssignment u;
  if (initial) {
    if (initial->n_hat() != n_hat || initial->size() != static_cast<std::size_t>(g.n_nodes()))
      throw ContractViolation("ac_run: initial partition does not match");
    u = indicator_matrix(*initial);
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    u.resize(g.n_nodes(), n_hat);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = unif(rng);
    for (Eigen::Index i = 0; i < u.rows(); ++i) u.row(i) /= u.row(i).sum();
  }

  out.trace.push_back(gl_energy(g, model, u, flow.eliminated(), rc.epsilon));
  int increases = 0;
  for (int it = 0; it < rc.max_iters; ++it) {
    SoftAssignment next = ac_step(flow, u, rc);
    const double change = (next - u).cwiseAbs().maxCoeff();
    u = std::move(next);
    ++out.iterations;
    const double e = gl_energy(g, model, u, flow.eliminated(), rc.epsilon);
    if (e > out.trace.back() + 1e-9 * (1.0 + std::abs(out.trace.back()))) ++increases;
    out.trace.push_back(e);
    if (change < rc.stop_tol) {
      out.converged = true;
      break;
    }
  }
  if (increases > 0)
    spdlog::debug("ac_run: Ginzburg-Landau energy increased in {} of {} steps (dt = {})", increases,
                  out.iterations, rc.dt);

  out.partition = round_rows(u, rng);
  out.energy = energy(g, model, out.partition, w);
  return out;
}

}  // namespace graphtension
