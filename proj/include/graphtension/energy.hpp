#pragma once

#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "graphtension/graph.hpp"

namespace graphtension {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Symmetric log-affinity matrix W = -log(omega), entries in (-inf, +inf].
///
/// +inf (omega = 0) is carried as IEEE infinity. In energy sums the products
/// inf * 0 are taken as 0 and exp(-inf) as 0.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  explicit AffinityMatrix(Eigen::MatrixXd w);

  /// `diag` on the diagonal, `off` elsewhere.
  static AffinityMatrix constant(int n_hat, double diag, double off);
  /// W = -log(omega); omega = 0 maps to +inf.
  static AffinityMatrix from_omega(const Eigen::MatrixXd& omega);

  int size() const noexcept { return static_cast<int>(w_.rows()); }
  double operator()(int a, int b) const { return w_(a, b); }
  const Eigen::MatrixXd& values() const noexcept { return w_; }

  /// omega = exp(-W), 0 where W is infinite.
  Eigen::MatrixXd omega() const;
  bool all_finite() const;
  std::optional<double> max_finite() const;

  /// Replaces every +inf by `factor` times the largest finite entry
  /// (for a negative maximum the reset moves by the same relative amount
  /// upwards, so the reset value always exceeds every finite entry).
  /// Throws DegenerateInputError when no entry is finite.
  AffinityMatrix with_infinities_reset(double factor) const;
  /// Clamps entries above `cap` (including +inf) to `cap`.
  AffinityMatrix capped(double cap) const;

  bool operator==(const AffinityMatrix& o) const;

 private:
  Eigen::MatrixXd w_;
};

/// Diagonal-free form of W: sigma_hat(a,b) = W(a,b) - W(a,a)/2 - W(b,b)/2.
struct EliminatedAffinity {
  Eigen::MatrixXd sigma_hat;
  Eigen::VectorXd diag_w;

  /// exp(-W) reconstructed from sigma_hat and diag_w (0 where sigma_hat is +inf).
  Eigen::MatrixXd volume_coupling() const;
};

/// Surface-tension energy
///   sum_{a,b} W(a,b) Cut(a,b) + exp(-W(a,b)) vol(a) vol(b) / 2m.
/// Returns +inf when an infinite tension meets a nonzero cut.
double energy(const PartitionStats& stats, const AffinityMatrix& w, double two_m);
double energy(const Graph& g, const DegreeModel& model, const Partition& p, const AffinityMatrix& w);
inline double energy(const Graph& g, const Partition& p, const AffinityMatrix& w) {
  return energy(g, DegreeModel::of(g), p, w);
}

/// Closed-form minimizer over W for fixed g:
///   omega(a,b) = 2m Cut(a,b) / (vol(a) vol(b)),  W = -log(omega).
/// Zero cuts and empty communities give +inf.
AffinityMatrix optimal_w(const PartitionStats& stats, double two_m);
AffinityMatrix optimal_w(const Graph& g, const DegreeModel& model, const Partition& p);
inline AffinityMatrix optimal_w(const Graph& g, const Partition& p) {
  return optimal_w(g, DegreeModel::of(g), p);
}

/// energy(g, optimal_w(g)) without materializing W:
///   sum over Cut > 0 of Cut * (1 - log(2m Cut / (vol vol))).
double profile_energy(const PartitionStats& stats, double two_m);

/// Exact change E(g with g_i <- target) - E(g) for fixed W.
///
/// `stats` must describe `p`. When W has infinite entries, the result is
/// +inf (-inf) if the move creates (removes) a nonzero cut on an infinite
/// tension and the finite part of the change otherwise.
double move_delta(const Graph& g, const DegreeModel& model, const Partition& p,
                  const PartitionStats& stats, const AffinityMatrix& w, NodeId i, int target);

/// Throws InputError if a diagonal entry of W is infinite.
EliminatedAffinity eliminate_diagonal(const AffinityMatrix& w);

/// sum_{a != b} sigma_hat(a,b) Cut(a,b) + sum_a W(a,a) vol(a), with vol taken from
/// the graph's own degrees (the identity only holds for row-sum volumes).
double eliminated_cut_sum(const PartitionStats& stats, const EliminatedAffinity& e);
/// sum_{a,b} W(a,b) Cut(a,b).
double cut_sum(const PartitionStats& stats, const AffinityMatrix& w);

/// (E_alg - E_ref) / |E_ref|. Throws UndefinedScoreError for E_ref == 0.
double score(double e_alg, double e_ref);

struct WellPosedness {
  bool nonneg = true;
  bool zero_diag = true;
  bool triangle = true;
};

/// Esedoglu-Otto sufficient conditions evaluated on W. Diagnostic only.
WellPosedness check_well_posedness(const AffinityMatrix& w);

}  // namespace graphtension
