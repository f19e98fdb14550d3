#include <doctest.h>

#include <cmath>
#include <numeric>

#include "graphtension/error.hpp"
#include "graphtension/generators.hpp"
#include "support.hpp"

using namespace graphtension;

namespace {

// Share of edge endpoints whose edge leaves the endpoint's community.
double mixing(const PlantedGraph& pg) {
  double out = 0.0;
  for (auto [i, j] : pg.graph.edges())
    if (pg.reference[i] != pg.reference[j]) out += 2.0;
  return out / pg.graph.two_m();
}

double power_law_mean(int lo, int hi, double exponent) {
  double num = 0.0, den = 0.0;
  for (int k = lo; k <= hi; ++k) {
    num += std::pow(k, 1.0 - exponent);
    den += std::pow(k, -exponent);
  }
  return num / den;
}

}  // namespace

TEST_CASE("planted partition sizes") {
  PpConfig cfg;
  const PlantedGraph pg = gen_pp(cfg);
  CHECK(pg.graph.n_nodes() == 16000);
  CHECK(pg.reference.n_hat() == 10);
  for (auto s : pg.reference.community_sizes()) CHECK(s == 1600);
}

TEST_CASE("planted partition degrees and mixing") {
  PpConfig cfg;
  cfg.n_nodes = 1600;
  cfg.n_hat = 4;
  const int k_max = pp_default_k_max(cfg.n_nodes, cfg.k_min, cfg.degree_exponent);
  CHECK(k_max == static_cast<int>(std::sqrt(1600.0 * power_law_mean(10, 300, 2.0))));
  CHECK(pp_default_k_max(16000, 10, 2.0) == 300);
  const double target = power_law_mean(cfg.k_min, k_max, cfg.degree_exponent);
  // With omega_in + 3 omega_out = 4, a stub lands inside with probability omega_in / 4.
  const double inside = 10.0 / 13.0;
  double mean = 0.0, mix = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const PlantedGraph pg = gen_pp(cfg);
    mean += pg.graph.two_m() / pg.graph.n_nodes() / 5.0;
    mix += mixing(pg) / 5.0;
  }
  CHECK(std::abs(mean - target) < 0.1 * target);
  CHECK(std::abs(mix - (1.0 - inside)) < 0.03);

  cfg.omega_in = cfg.omega_out = 1.0;
  cfg.seed = 9;
  CHECK(std::abs(mixing(gen_pp(cfg)) - 0.75) < 0.03);
}

TEST_CASE("planted partition is deterministic per seed") {
  PpConfig cfg;
  cfg.n_nodes = 400;
  cfg.n_hat = 4;
  cfg.seed = 3;
  const PlantedGraph a = gen_pp(cfg), b = gen_pp(cfg);
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.reference == b.reference);
  cfg.k_min = 0;
  CHECK_THROWS_AS(gen_pp(cfg), ConfigError);
}

TEST_CASE("LFR-style benchmark") {
  LfrConfig cfg;
  double mix = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const PlantedGraph pg = gen_lfr_style(cfg);
    CHECK(pg.graph.n_nodes() == 1000);
    for (auto s : pg.reference.community_sizes()) {
      CHECK(s >= cfg.size_min);
      CHECK(s <= cfg.size_max);
    }
    mix += mixing(pg) / 5.0;
  }
  CHECK(std::abs(mix - cfg.mu) < 0.03);

  cfg.mu = 0.0;
  CHECK(mixing(gen_lfr_style(cfg)) == 0.0);
}

TEST_CASE("multiscale graph") {
  const auto sizes = multiscale_sizes(10);
  CHECK(std::accumulate(sizes.begin(), sizes.end(), NodeId{0}) == 10230);
  CHECK(multiscale_sizes(6) == std::vector<NodeId>{10, 20, 40, 80, 160, 320});

  const PlantedGraph pg = gen_multiscale(6, 4);
  CHECK(pg.graph.n_nodes() == 630);
  CHECK(pg.reference.n_hat() == 6);
  int bridges = 0;
  for (auto [i, j] : pg.graph.edges())
    if (pg.reference[i] != pg.reference[j]) {
      ++bridges;
      CHECK(std::abs(pg.reference[i] - pg.reference[j]) == 1);
    }
  CHECK(bridges == 5);
  // The first two components are cliques.
  const PartitionStats s = partition_stats(pg.graph, pg.reference);
  CHECK(s.cut(0, 0) == 90.0);
  CHECK(s.cut(1, 1) == 380.0);
}
