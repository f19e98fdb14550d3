#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "graphtension/error.hpp"
#include "graphtension/eval.hpp"
#include "graphtension/experiment.hpp"
#include "graphtension/result.hpp"
#include "support.hpp"

using namespace graphtension;

namespace {

// Pairwise cosine scan with lower-index tie breaking, then union symmetrization.
std::vector<Edge> knn_oracle(const FeatureMatrix& f, int k) {
  const Eigen::Index n = f.rows();
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Eigen::Index>> cand;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (Eigen::Index c = 0; c < f.cols(); ++c) {
        dot += f(i, c) * f(j, c);
        ni += f(i, c) * f(i, c);
        nj += f(j, c) * f(j, c);
      }
      cand.push_back({ni > 0 && nj > 0 ? dot / std::sqrt(ni * nj) : 0.0, j});
    }
    std::stable_sort(cand.begin(), cand.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (int t = 0; t < k; ++t) {
      const auto j = static_cast<NodeId>(cand[t].second);
      edges.push_back({std::min<NodeId>(i, j), std::max<NodeId>(i, j)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

TEST_CASE("NMI properties") {
  Rng rng(1);
  const Partition a = gt_test::random_partition(100, 4, rng);
  const Partition b = gt_test::random_partition(100, 3, rng);
  CHECK(nmi(a, a) == doctest::Approx(1.0));
  CHECK(nmi(Partition::single(100), a) == doctest::Approx(0.0));
  CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)));
  std::vector<std::int32_t> relabeled(a.labels().begin(), a.labels().end());
  for (auto& l : relabeled) l = 3 - l;
  CHECK(nmi(a, Partition(relabeled, 4)) == doctest::Approx(1.0));
  CHECK(nmi(a, b) < 0.2);
  CHECK(nmi(Partition::single(5), Partition::single(5)) == 1.0);
  CHECK_THROWS_AS(nmi(a, Partition::single(5)), InputError);
}

TEST_CASE("NMI on a hand-computed pair") {
  // a = {0,0,1,1}, b = {0,0,0,1}: I = 1.5 log 2 - 0.75 log 3, H(a) = log 2,
  // H(b) = 2 log 2 - 0.75 log 3.
  const Partition a({0, 0, 1, 1}, 2), b({0, 0, 0, 1}, 2);
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  const double expected = 2.0 * (1.5 * l2 - 0.75 * l3) / (l2 + 2.0 * l2 - 0.75 * l3);
  CHECK(nmi(a, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kNN examples") {
  const FeatureMatrix same = Eigen::MatrixXd::Ones(3, 2);
  CHECK(knn_graph(same, 1).edges() == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK(knn_graph(same, 2).n_edges() == 3);

  const FeatureMatrix onehot = Eigen::MatrixXd::Identity(4, 4);
  CHECK(knn_graph(onehot, 1).edges() == std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});

  CHECK_THROWS_AS(knn_graph(same, 0), InputError);
  CHECK_THROWS_AS(knn_graph(same, 3), InputError);
}

TEST_CASE("kNN matches a brute-force scan") {
  Rng rng(2);
  std::normal_distribution<double> z(0.0, 1.0);
  FeatureMatrix f(200, 6);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = z(rng);
  for (int k : {1, 5, 10}) {
    const Graph g = knn_graph(f, k);
    CHECK(g.edges() == knn_oracle(f, k));
    for (NodeId i = 0; i < g.n_nodes(); ++i) CHECK(g.degree(i) >= 1);
  }
}

TEST_CASE("nonlocal features") {
  const std::array<double, 3> w{1.0, 0.5, 0.25};
  Image img{3, 3, 1, {1, 2, 3, 4, 5, 6, 7, 8, 9}};
  const FeatureMatrix f = nonlocal_features(img, 1, w);
  CHECK(f.cols() == 9);
  const Eigen::RowVectorXd center = f.row(4);
  const Eigen::RowVectorXd want = (Eigen::RowVectorXd(9) << 0.25 * 1, 0.5 * 2, 0.25 * 3, 0.5 * 4, 5, 0.5 * 6,
                                   0.25 * 7, 0.5 * 8, 0.25 * 9).finished();
  CHECK((center - want).norm() < 1e-15);
  // Corner pixel replicates its edge neighbours.
  CHECK(f(0, 0) == doctest::Approx(0.25 * 1));
  CHECK(f(0, 8) == doctest::Approx(0.25 * 5));

  Image flat{4, 5, 2, std::vector<double>(40, 0.7)};
  const FeatureMatrix g = nonlocal_features(flat);
  for (Eigen::Index r = 1; r < g.rows(); ++r) CHECK(g.row(r) == g.row(0));

  const FeatureMatrix c = nonlocal_features(img, 1, {1.0, 0.0, 0.0});
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    CHECK(c(r, 4) == img.data[r]);
    CHECK(c.row(r).cwiseAbs().sum() == doctest::Approx(img.data[r]));
  }
}

TEST_CASE("feature files") {
  FeatureMatrix f(2, 3);
  f << 1.5, -2, 0.125, 3, 4, 5;
  std::stringstream s;
  write_features(s, f);
  CHECK(load_features(s) == f);

  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(load_features(ragged), ParseError);
  std::istringstream bad("1,abc\n");
  CHECK_THROWS_AS(load_features(bad), ParseError);

  const Image img = image_from_rows(f.transpose().reshaped(3, 2).transpose(), 1, 2);
  CHECK(img.channels == 3);
  CHECK(img.at(0, 1, 2) == 5.0);
}

TEST_CASE("result JSON round trip") {
  RunResult r;
  r.energy = -12.5;
  r.reference_energy = 3.25;
  r.score = 0.125;
  r.nmi = 0.875;
  r.n_communities = 2;
  r.w_matrix = AffinityMatrix(Eigen::Matrix2d{{0.5, kInf}, {kInf, -1.0}});
  r.runtime_s = 1.5;
  r.seed = 42;
  r.solver = "mbo";
  r.params = {{"tau", 0.3}};
  const nlohmann::json j = to_json(r);
  CHECK(j["w_matrix"][0][1] == "inf");
  CHECK(run_result_from_json(nlohmann::json::parse(j.dump())) == r);

  RunResult bare;
  bare.score_undefined = true;
  bare.w_matrix = AffinityMatrix(Eigen::Matrix<double, 1, 1>{0.0});
  CHECK(run_result_from_json(to_json(bare)) == bare);
  CHECK_THROWS_AS(run_result_from_json(nlohmann::json{{"energy", "x"}}), InputError);
}

TEST_CASE("evaluate a partition against a reference") {
  const Graph g = gt_test::two_k3();
  const Partition ref({0, 0, 0, 1, 1, 1}, 2);
  const RunResult r = evaluate_partition(g, ref, &ref);
  CHECK(*r.score == 0.0);
  CHECK(*r.nmi == doctest::Approx(1.0));
  CHECK(r.n_communities == 2);
  CHECK(r.w_matrix(0, 1) == kInf);

  const Partition one = Partition::single(6);
  const RunResult z = evaluate_partition(g, ref, &one);
  CHECK(z.score.has_value());
  CHECK(*z.score < 0.0);
}
