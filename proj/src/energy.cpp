#include "graphtension/energy.hpp"

#include <algorithm>
#include <cmath>

#include "graphtension/error.hpp"

namespace graphtension {

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw ContractViolation("affinity matrix must be square");
  for (Eigen::Index a = 0; a < w_.rows(); ++a)
    for (Eigen::Index b = 0; b < w_.cols(); ++b) {
      const double v = w_(a, b);
      if (std::isnan(v) || v == -kInf)
        throw ContractViolation("affinity entries must lie in (-inf, +inf]");
      if (v != w_(b, a)) throw ContractViolation("affinity matrix must be symmetric");
    }
}

AffinityMatrix AffinityMatrix::constant(int n_hat, double diag, double off) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(n_hat, n_hat, off);
  w.diagonal().setConstant(diag);
  return AffinityMatrix(std::move(w));
}

AffinityMatrix AffinityMatrix::from_omega(const Eigen::MatrixXd& omega) {
  Eigen::MatrixXd w(omega.rows(), omega.cols());
  for (Eigen::Index a = 0; a < omega.rows(); ++a)
    for (Eigen::Index b = 0; b < omega.cols(); ++b) {
      const double o = omega(a, b);
      if (!(o >= 0.0)) throw ContractViolation("omega entries must be nonnegative");
      w(a, b) = o == 0.0 ? kInf : -std::log(o);
    }
  return AffinityMatrix(std::move(w));
}

Eigen::MatrixXd AffinityMatrix::omega() const {
  return w_.unaryExpr([](double v) { return v == kInf ? 0.0 : std::exp(-v); });
}

bool AffinityMatrix::all_finite() const { return w_.allFinite(); }

std::optional<double> AffinityMatrix::max_finite() const {
  std::optional<double> best;
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    const double v = w_.data()[i];
    if (v != kInf && (!best || v > *best)) best = v;
  }
  return best;
}

AffinityMatrix AffinityMatrix::with_infinities_reset(double factor) const {
  if (all_finite()) return *this;
  const auto wmax = max_finite();
  if (!wmax) throw DegenerateInputError("every affinity entry is infinite; nothing to reset to");
  const double reset = *wmax > 0.0 ? factor * *wmax
                                   : *wmax + (factor - 1.0) * std::max(std::abs(*wmax), 1.0);
  Eigen::MatrixXd w = w_;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w.data()[i] == kInf) w.data()[i] = reset;
  return AffinityMatrix(std::move(w));
}

AffinityMatrix AffinityMatrix::capped(double cap) const {
  return AffinityMatrix(w_.cwiseMin(cap));
}

bool AffinityMatrix::operator==(const AffinityMatrix& o) const {
  return w_.rows() == o.w_.rows() && w_.cols() == o.w_.cols() && w_ == o.w_;
}

Eigen::MatrixXd EliminatedAffinity::volume_coupling() const {
  const auto n = sigma_hat.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double s = sigma_hat(a, b);
      c(a, b) = s == kInf ? 0.0 : std::exp(-(s + 0.5 * diag_w[a] + 0.5 * diag_w[b]));
    }
  return c;
}

// ---------------------------------------------------------------------------

double energy(const PartitionStats& stats, const AffinityMatrix& w, double two_m) {
  const auto n = stats.cut.rows();
  if (w.size() != n) throw ContractViolation("affinity size does not match partition");
  double e = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double wab = w(a, b);
      const double c = stats.cut(a, b);
      if (c > 0.0) e += wab * c;
      if (wab != kInf && two_m > 0.0) e += std::exp(-wab) * stats.vol[a] * stats.vol[b] / two_m;
    }
  return e;
}

double energy(const Graph& g, const DegreeModel& model, const Partition& p,
              const AffinityMatrix& w) {
  return energy(partition_stats(g, p, model), w, model.two_m);
}

AffinityMatrix optimal_w(const PartitionStats& stats, double two_m) {
  const auto n = stats.cut.rows();
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double c = stats.cut(a, b);
      const double vv = stats.vol[a] * stats.vol[b];
      w(a, b) = (c > 0.0 && vv > 0.0) ? -std::log(two_m * c / vv) : kInf;
    }
  // Cut and vol products are symmetric up to rounding of the log; force exact symmetry.
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) w(b, a) = w(a, b);
  return AffinityMatrix(std::move(w));
}

AffinityMatrix optimal_w(const Graph& g, const DegreeModel& model, const Partition& p) {
  return optimal_w(partition_stats(g, p, model), model.two_m);
}

double profile_energy(const PartitionStats& stats, double two_m) {
  const auto n = stats.cut.rows();
  double e = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double c = stats.cut(a, b);
      const double vv = stats.vol[a] * stats.vol[b];
      if (c > 0.0 && vv > 0.0) e += c * (1.0 - std::log(two_m * c / vv));
    }
  return e;
}

double move_delta(const Graph& g, const DegreeModel& model, const Partition& p,
                  const PartitionStats& stats, const AffinityMatrix& w, NodeId i, int target) {
  if (i < 0 || i >= g.n_nodes()) throw ContractViolation("move_delta: node out of range");
  const int n = p.n_hat();
  if (target < 0 || target >= n) throw ContractViolation("move_delta: target out of range");
  if (w.size() != n) throw ContractViolation("move_delta: affinity size mismatch");
  const int from = p[i];
  if (from == target) return 0.0;

  // Only rows/columns `from` and `target` of Cut change:
  //   dCut(r,c) = -[r=from] x_c - [c=from] x_r + [r=to] x_c + [c=to] x_r.
  auto x = stats.x.row(i);
  auto dcut = [&](int r, int c) {
    return -(r == from ? x[c] : 0.0) - (c == from ? x[r] : 0.0) + (r == target ? x[c] : 0.0) +
           (c == target ? x[r] : 0.0);
  };
  double finite = 0.0;
  int inf_balance = 0;
  auto visit = [&](int r, int c) {
    const double d = dcut(r, c);
    if (d == 0.0) return;
    const double wrc = w(r, c);
    if (wrc == kInf) {
      const double before = stats.cut(r, c);
      const double after = before + d;
      inf_balance += static_cast<int>(after > 0.5) - static_cast<int>(before > 0.5);
    } else {
      finite += wrc * d;
    }
  };
  for (int c = 0; c < n; ++c) {
    visit(from, c);
    visit(target, c);
  }
  for (int r = 0; r < n; ++r) {
    if (r == from || r == target) continue;
    visit(r, from);
    visit(r, target);
  }
  if (inf_balance > 0) return kInf;
  if (inf_balance < 0) return -kInf;

  if (model.two_m > 0.0) {
    const Eigen::MatrixXd ew = w.omega();
    const double k = model.degrees[i];
    const double vol_term = 2.0 * k * (ew.row(target) - ew.row(from)).dot(stats.vol) +
                            k * k * (ew(target, target) + ew(from, from) - 2.0 * ew(from, target));
    finite += vol_term / model.two_m;
  }
  return finite;
}

EliminatedAffinity eliminate_diagonal(const AffinityMatrix& w) {
  const int n = w.size();
  EliminatedAffinity e;
  e.diag_w = w.values().diagonal();
  if (!e.diag_w.allFinite())
    throw InputError("diagonal elimination needs a finite diagonal of W");
  e.sigma_hat.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      e.sigma_hat(a, b) = a == b ? 0.0 : w(a, b) - 0.5 * e.diag_w[a] - 0.5 * e.diag_w[b];
  return e;
}

double cut_sum(const PartitionStats& stats, const AffinityMatrix& w) {
  double s = 0.0;
  for (Eigen::Index a = 0; a < stats.cut.rows(); ++a)
    for (Eigen::Index b = 0; b < stats.cut.cols(); ++b)
      if (stats.cut(a, b) > 0.0) s += w(a, b) * stats.cut(a, b);
  return s;
}

double eliminated_cut_sum(const PartitionStats& stats, const EliminatedAffinity& e) {
  double s = 0.0;
  const Eigen::VectorXd own_vol = stats.cut.rowwise().sum();
  for (Eigen::Index a = 0; a < stats.cut.rows(); ++a) {
    for (Eigen::Index b = 0; b < stats.cut.cols(); ++b)
      if (a != b && stats.cut(a, b) > 0.0) s += e.sigma_hat(a, b) * stats.cut(a, b);
    s += e.diag_w[a] * own_vol[a];
  }
  return s;
}

double score(double e_alg, double e_ref) {
  if (e_ref == 0.0) throw UndefinedScoreError("score is undefined for a zero reference energy");
  return (e_alg - e_ref) / std::abs(e_ref);
}

WellPosedness check_well_posedness(const AffinityMatrix& w) {
  WellPosedness r;
  const int n = w.size();
  for (int a = 0; a < n; ++a) {
    if (w(a, a) != 0.0) r.zero_diag = false;
    for (int b = 0; b < n; ++b) {
      if (w(a, b) < 0.0) r.nonneg = false;
      for (int c = 0; c < n; ++c)
        if (w(a, c) + w(c, b) < w(a, b)) r.triangle = false;
    }
  }
  return r;
}

}  // namespace graphtension
