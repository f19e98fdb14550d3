#include <doctest.h>

#include <cmath>

#include "graphtension/energy.hpp"
#include "graphtension/error.hpp"
#include "support.hpp"

using namespace graphtension;

namespace {

const Partition k3_split({0, 1, 1}, 2);

// Minimizer of f(w) = w * cut + exp(-w) * c on [lo, hi] by golden-section search.
double golden_min(double cut, double c, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double w) { return w * cut + std::exp(-w) * c; };
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

TEST_CASE("energy examples") {
  const Graph g = gt_test::k3();
  CHECK(energy(g, k3_split, AffinityMatrix::constant(2, 0.0, 0.0)) == doctest::Approx(6.0));
  const AffinityMatrix w(Eigen::Matrix2d{{0, 1}, {1, 0}});
  const double expected = 4.0 + 20.0 / 6.0 + 16.0 / 6.0 * std::exp(-1.0);
  CHECK(energy(g, k3_split, w) == doctest::Approx(expected).epsilon(1e-14));
  const AffinityMatrix winf(Eigen::Matrix2d{{kInf, 1}, {1, 0}});
  CHECK(std::isfinite(energy(g, k3_split, winf)));
  const AffinityMatrix wbad(Eigen::Matrix2d{{0, 1}, {1, kInf}});
  CHECK(energy(g, k3_split, wbad) == kInf);
}

TEST_CASE("W = 0 gives energy 2m for any partition") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Graph g = gt_test::random_graph(20, 0.3, rng);
    if (g.two_m() == 0.0) continue;
    const Partition p = gt_test::random_partition(20, 3, rng);
    CHECK(energy(g, p, AffinityMatrix::constant(3, 0.0, 0.0)) == doctest::Approx(g.two_m()));
  }
}

TEST_CASE("energy matches the pairwise oracle") {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Graph g = gt_test::random_graph(30, 0.2, rng);
    const Partition p = gt_test::random_partition(30, 4, rng);
    const Eigen::MatrixXd w = gt_test::random_symmetric(4, -2.0, 4.0, rng);
    CHECK(energy(g, p, AffinityMatrix(w)) == doctest::Approx(gt_test::oracle_energy(g, p, w)).epsilon(1e-12));
  }
}

TEST_CASE("optimal W examples") {
  const Graph g = gt_test::k3();
  const AffinityMatrix one = optimal_w(g, Partition::single(3));
  CHECK(one(0, 0) == doctest::Approx(0.0));
  const AffinityMatrix w = optimal_w(g, k3_split);
  CHECK(w(0, 0) == kInf);
  CHECK(w(0, 1) == doctest::Approx(-std::log(1.5)));
  CHECK(w(1, 0) == doctest::Approx(-std::log(1.5)));
  CHECK(w(1, 1) == doctest::Approx(-std::log(0.75)));
  CHECK(w.omega()(0, 0) == 0.0);
}

TEST_CASE("optimal W minimizes energy and each entry matches a 1-D scan") {
  Rng rng(7);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (int t = 0; t < 30; ++t) {
    const Graph g = gt_test::random_graph(25, 0.25, rng);
    const Partition p = gt_test::random_partition(25, 3, rng);
    const PartitionStats s = partition_stats(g, p);
    const AffinityMatrix w = optimal_w(s, g.two_m());
    const double e_star = energy(s, w, g.two_m());
    CHECK(e_star == doctest::Approx(profile_energy(s, g.two_m())).epsilon(1e-12));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (s.cut(a, b) == 0.0) {
          CHECK(w(a, b) == kInf);
          continue;
        }
        const double scan = golden_min(s.cut(a, b), s.vol(a) * s.vol(b) / g.two_m(), -30.0, 30.0);
        CHECK(std::abs(w(a, b) - scan) < 1e-6);
      }
    for (int k = 0; k < 10; ++k) {
      Eigen::MatrixXd wp = w.values();
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          const double v = std::isfinite(wp(a, b)) ? wp(a, b) + noise(rng) : std::abs(noise(rng)) * 4.0;
          wp(a, b) = wp(b, a) = v;
        }
      CHECK(e_star <= energy(s, AffinityMatrix(wp), g.two_m()) + 1e-12);
    }
  }
}

TEST_CASE("move_delta examples") {
  const Graph g = gt_test::k3();
  const DegreeModel model = DegreeModel::of(g);
  const AffinityMatrix w(Eigen::Matrix2d{{0, 1}, {1, 0}});
  const PartitionStats s = partition_stats(g, k3_split);
  CHECK(move_delta(g, model, k3_split, s, w, 1, 1) == 0.0);
  const double before = 4.0 + 20.0 / 6.0 + 16.0 / 6.0 * std::exp(-1.0);
  CHECK(move_delta(g, model, k3_split, s, w, 0, 1) == doctest::Approx(6.0 - before));
  CHECK_THROWS_AS(move_delta(g, model, k3_split, s, w, 5, 0), ContractViolation);
  CHECK_THROWS_AS(move_delta(g, model, k3_split, s, w, 0, 2), ContractViolation);
}

TEST_CASE("move_delta matches full recomputation") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const NodeId n = std::uniform_int_distribution<NodeId>(2, 50)(rng);
    const int n_hat = std::uniform_int_distribution<int>(1, 5)(rng);
    const Graph g = gt_test::random_graph(n, 0.2, rng);
    const Partition p = gt_test::random_partition(n, n_hat, rng);
    const Eigen::MatrixXd w = gt_test::random_symmetric(n_hat, -3.0, 5.0, rng);
    if (g.two_m() == 0.0) continue;
    const NodeId i = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    const int target = std::uniform_int_distribution<int>(0, n_hat - 1)(rng);
    Partition moved = p;
    moved.assign(i, target);
    const double ref = gt_test::oracle_energy(g, moved, w) - gt_test::oracle_energy(g, p, w);
    const double d = move_delta(g, DegreeModel::of(g), p, partition_stats(g, p), AffinityMatrix(w), i, target);
    CHECK(std::abs(d - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("move_delta with infinite tensions") {
  const Graph g = gt_test::two_k3();
  const Partition p({0, 0, 0, 1, 1, 1}, 2);
  const AffinityMatrix w(Eigen::Matrix2d{{0, kInf}, {kInf, 0}});
  const PartitionStats s = partition_stats(g, p);
  CHECK(move_delta(g, DegreeModel::of(g), p, s, w, 0, 1) == kInf);
  const Partition q({1, 0, 0, 1, 1, 1}, 2);
  CHECK(move_delta(g, DegreeModel::of(g), q, partition_stats(g, q), w, 0, 0) == -kInf);
}

TEST_CASE("diagonal elimination") {
  const EliminatedAffinity e = eliminate_diagonal(AffinityMatrix(Eigen::Matrix2d{{1, 3}, {3, 2}}));
  CHECK(e.sigma_hat(0, 1) == doctest::Approx(1.5));
  CHECK(e.sigma_hat(0, 0) == doctest::Approx(0.0));
  CHECK(e.diag_w(0) == 1.0);
  CHECK(e.diag_w(1) == 2.0);

  const Eigen::Matrix2d zd{{0, 2}, {2, 0}};
  CHECK((eliminate_diagonal(AffinityMatrix(zd)).sigma_hat - zd).norm() == 0.0);
  CHECK_THROWS_AS(eliminate_diagonal(AffinityMatrix(Eigen::Matrix2d{{kInf, 1}, {1, 0}})), InputError);
}

TEST_CASE("eliminated cut sum identity") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Graph g = gt_test::random_graph(30, 0.2, rng);
    const Partition p = gt_test::random_partition(30, 4, rng);
    const Eigen::MatrixXd w = gt_test::random_symmetric(4, -2.0, 6.0, rng);
    const PartitionStats s = partition_stats(g, p);
    const EliminatedAffinity e = eliminate_diagonal(AffinityMatrix(w));
    const double lhs = (w.array() * s.cut.array()).sum();
    CHECK(cut_sum(s, AffinityMatrix(w)) == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(std::abs(eliminated_cut_sum(s, e) - lhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("score") {
  CHECK(score(5.0, 5.0) == 0.0);
  CHECK(score(0.9 * 7.0, 7.0) == doctest::Approx(-0.1));
  CHECK(score(-2.0, -1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(score(1.0, 0.0), UndefinedScoreError);
}

TEST_CASE("well-posedness conditions") {
  WellPosedness ok = check_well_posedness(AffinityMatrix(Eigen::Matrix2d{{0, 1}, {1, 0}}));
  CHECK(ok.nonneg);
  CHECK(ok.zero_diag);
  CHECK(ok.triangle);
  CHECK_FALSE(check_well_posedness(AffinityMatrix(Eigen::Matrix2d{{0, -1}, {-1, 0}})).nonneg);
  CHECK_FALSE(check_well_posedness(AffinityMatrix(Eigen::Matrix2d{{1, 1}, {1, 0}})).zero_diag);
  const Eigen::Matrix3d w{{0, 5, 1}, {5, 0, 1}, {1, 1, 0}};
  CHECK_FALSE(check_well_posedness(AffinityMatrix(w)).triangle);
}

TEST_CASE("affinity infinities reset and cap") {
  const AffinityMatrix w(Eigen::Matrix2d{{2, kInf}, {kInf, 1}});
  const AffinityMatrix r = w.with_infinities_reset(1.1);
  CHECK(r(0, 1) == doctest::Approx(2.2));
  CHECK(r(0, 0) == 2.0);
  const AffinityMatrix neg(Eigen::Matrix2d{{-2, kInf}, {kInf, -1}});
  CHECK(neg.with_infinities_reset(1.1)(0, 1) > -1.0);
  CHECK(w.capped(1.5)(0, 1) == 1.5);
  CHECK(w.capped(1.5)(0, 0) == 1.5);
  CHECK_THROWS_AS(AffinityMatrix::constant(2, kInf, kInf).with_infinities_reset(1.1), DegenerateInputError);
  const AffinityMatrix o = AffinityMatrix::from_omega(Eigen::Matrix2d{{1, 0}, {0, std::exp(-2.0)}});
  CHECK(o(0, 1) == kInf);
  CHECK(o(1, 1) == doctest::Approx(2.0));
}
