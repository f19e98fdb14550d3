#include <doctest.h>

#include <sstream>

#include "graphtension/error.hpp"
#include "graphtension/graph.hpp"
#include "support.hpp"

using namespace graphtension;

TEST_CASE("edge list loading") {
  SUBCASE("triangle") {
    std::istringstream in("0 1\n1 2\n2 0");
    const Graph g = load_edge_list(in);
    CHECK(g.n_nodes() == 3);
    CHECK(g.two_m() == 6.0);
    for (NodeId i = 0; i < 3; ++i) CHECK(g.degree(i) == 2);
  }
  SUBCASE("duplicates collapse and loops drop") {
    std::istringstream in("0 1\n0 1\n1 1");
    const Graph g = load_edge_list(in);
    CHECK(g.n_nodes() == 2);
    CHECK(g.n_edges() == 1);
    CHECK(g.has_edge(0, 1));
  }
  SUBCASE("comments and min_nodes") {
    std::istringstream in("# header\n0 1\n");
    const Graph g = load_edge_list(in, 5);
    CHECK(g.n_nodes() == 5);
    CHECK(g.degree(4) == 0);
  }
  SUBCASE("parse error carries the line") {
    std::istringstream in("0 x");
    try {
      load_edge_list(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
    std::istringstream in2("0 1\n\n2 y\n");
    try {
      load_edge_list(in2);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("negative id") {
    std::istringstream in("0 -1");
    CHECK_THROWS_AS(load_edge_list(in), InputError);
  }
}

TEST_CASE("edge list round trip") {
  Rng rng(3);
  const Graph g = gt_test::random_graph(40, 0.1, rng);
  std::stringstream s;
  write_edge_list(s, g);
  const Graph h = load_edge_list(s, g.n_nodes());
  CHECK(h.edges() == g.edges());
}

TEST_CASE("partition stats on K3") {
  const Graph g = gt_test::k3();
  SUBCASE("split (1,2,2)") {
    const PartitionStats s = partition_stats(g, Partition({0, 1, 1}, 2));
    CHECK(s.cut(0, 0) == 0.0);
    CHECK(s.cut(0, 1) == 2.0);
    CHECK(s.cut(1, 0) == 2.0);
    CHECK(s.cut(1, 1) == 2.0);
    CHECK(s.vol(0) == 2.0);
    CHECK(s.vol(1) == 4.0);
  }
  SUBCASE("one community") {
    const PartitionStats s = partition_stats(g, Partition::single(3));
    CHECK(s.cut(0, 0) == 6.0);
    CHECK(s.vol(0) == 6.0);
  }
}

TEST_CASE("partition stats conserve 2m and match the dense oracle") {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const Graph g = gt_test::random_graph(25, 0.2, rng);
    const Partition p = gt_test::random_partition(25, 4, rng);
    const PartitionStats s = partition_stats(g, p);
    CHECK(s.cut.sum() == doctest::Approx(g.two_m()));
    CHECK(s.vol.sum() == doctest::Approx(g.two_m()));
    const Eigen::MatrixXd u = indicator_matrix(p);
    const Eigen::MatrixXd a = gt_test::dense_adjacency(g);
    CHECK((u.transpose() * a * u - s.cut).norm() < 1e-12);
    CHECK((a * u - s.x).norm() < 1e-12);
  }
}

TEST_CASE("partition labels are checked") {
  CHECK_THROWS_AS(Partition({0, 2}, 2), ContractViolation);
  Partition p({0, 1}, 2);
  CHECK_THROWS_AS(p.assign(0, 5), ContractViolation);
  const Partition c = Partition({3, 3, 1}, 4).compacted();
  CHECK(c.n_hat() == 2);
  CHECK(c[0] == 0);
  CHECK(c[2] == 1);
}

TEST_CASE("induced subgraphs") {
  const Graph g = gt_test::k3();
  const std::vector<NodeId> two{1, 2};
  Subgraph s = induced_subgraph(g, two);
  CHECK(s.graph.n_nodes() == 2);
  CHECK(s.graph.n_edges() == 1);
  CHECK(s.to_global == two);

  const std::vector<NodeId> one{1};
  s = induced_subgraph(g, one);
  CHECK(s.graph.n_nodes() == 1);
  CHECK(s.graph.n_edges() == 0);

  const std::vector<NodeId> first{0, 1, 2};
  s = induced_subgraph(gt_test::two_k3(), first);
  CHECK(s.graph.edges() == g.edges());

  CHECK_THROWS_AS(induced_subgraph(g, std::vector<NodeId>{}), InputError);
}

TEST_CASE("partition file round trip") {
  const Partition p({0, 2, 1, 2}, 3);
  std::stringstream s;
  write_partition(s, p);
  CHECK(s.str().find("1 3") != std::string::npos);
  CHECK(load_partition(s, 4) == p);
}

TEST_CASE("laplacian products agree with the dense Laplacian") {
  Rng rng(5);
  const Graph g = gt_test::random_graph(30, 0.15, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(30, 3);
  CHECK((g.multiply_laplacian(x) - gt_test::dense_laplacian(g) * x).norm() < 1e-12);
  CHECK((Eigen::MatrixXd(g.laplacian_matrix()) - gt_test::dense_laplacian(g)).norm() == 0.0);
}
