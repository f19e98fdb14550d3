#pragma once

#include <Eigen/Dense>

#include "graphtension/energy.hpp"
#include "graphtension/graph.hpp"

namespace graphtension::detail {

// Evaluates move deltas for every target of one node. Keeps PartitionStats
// (and X W when W is finite) current under single-node moves.
class MoveEvaluator {
 public:
  MoveEvaluator(const Graph& g, const DegreeModel& model, const Partition& p,
                const AffinityMatrix& w)
      : g_(g), model_(model), w_(w), finite_(w.all_finite()), ew_(w.omega()),
        stats_(partition_stats(g, p, model)) {
    ewvol_ = ew_ * stats_.vol;
    if (finite_) xw_ = stats_.x * w_.values();
  }

  const PartitionStats& stats() const { return stats_; }

  void deltas(const Partition& p, NodeId i, Eigen::VectorXd& out) const {
    const int n = p.n_hat();
    out.resize(n);
    if (!finite_) {
      for (int a = 0; a < n; ++a) out[a] = move_delta(g_, model_, p, stats_, w_, i, a);
      return;
    }
    const int from = p[i];
    const double k = model_.degrees[i];
    const double inv_two_m = model_.two_m > 0.0 ? 1.0 / model_.two_m : 0.0;
    for (int a = 0; a < n; ++a) {
      if (a == from) {
        out[a] = 0.0;
        continue;
      }
      const double cut_part = 2.0 * (xw_(i, a) - xw_(i, from));
      const double vol_part =
          2.0 * k * (ewvol_[a] - ewvol_[from]) + k * k * (ew_(a, a) + ew_(from, from) - 2.0 * ew_(a, from));
      out[a] = cut_part + vol_part * inv_two_m;
    }
  }

  void apply_move(NodeId i, int from, int to) {
    if (from == to) return;
    const double k = model_.degrees[i];
    stats_.vol[from] -= k;
    stats_.vol[to] += k;
    ewvol_ += k * (ew_.col(to) - ew_.col(from));
    const Eigen::RowVectorXd xi = stats_.x.row(i);
    stats_.cut.row(from) -= xi;
    stats_.cut.col(from) -= xi.transpose();
    stats_.cut.row(to) += xi;
    stats_.cut.col(to) += xi.transpose();
    for (NodeId j : g_.neighbors(i)) {
      stats_.x(j, from) -= 1.0;
      stats_.x(j, to) += 1.0;
      if (finite_) xw_.row(j) += w_.values().row(to) - w_.values().row(from);
    }
  }

 private:
  const Graph& g_;
  const DegreeModel& model_;
  const AffinityMatrix& w_;
  bool finite_;
  Eigen::MatrixXd ew_;
  PartitionStats stats_;
  Eigen::VectorXd ewvol_;
  Eigen::MatrixXd xw_;
};

}  // namespace graphtension::detail
