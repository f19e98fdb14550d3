#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "graphtension/graph.hpp"

namespace graphtension {

/// A generated graph with the partition it was built from.
struct PlantedGraph {
  Graph graph;
  Partition reference;
  std::map<std::string, double> params;
};

/// Degree-corrected planted partition.
///
/// Expected degrees follow a discrete power law on [k_min, k_max]. Edge counts
/// between i != j are Poisson(omega(g_i, g_j) k_i k_j / 2m), clipped to one.
/// With `normalize`, omega is rescaled so omega_in + (n_hat - 1) omega_out = n_hat,
/// which keeps expected degrees equal to k for equal-volume communities.
/// lambda in [0, 1], when set, replaces omega_in/omega_out by the interpolation
/// omega = lambda * n_hat * I + (1 - lambda) * 1 between planted and null models.
struct PpConfig {
  NodeId n_nodes = 16000;
  int n_hat = 10;
  double degree_exponent = 2.0;
  int k_min = 10;
  int k_max = 0;  // 0 selects pp_default_k_max(n_nodes, k_min, degree_exponent)
  double omega_in = 10.0;
  double omega_out = 1.0;
  bool normalize = true;
  double lambda = -1.0;  // negative: use omega_in / omega_out
  std::uint64_t seed = 0;
};

PlantedGraph gen_pp(const PpConfig& cfg);

/// min(300, floor(sqrt(N <k>))) with <k> the power-law mean on [k_min, 300].
/// Above this structural cutoff hub pairs would need several parallel edges,
/// which the clipping to a simple graph discards.
int pp_default_k_max(NodeId n_nodes, int k_min, double degree_exponent);

/// LFR-style benchmark by stub matching. Node i gets ceil((1 - mu) k_i)
/// internal stubs and the rest external; stubs are paired uniformly within a
/// community (internal) or across the graph (external), then the multigraph is
/// made simple. The lower degree bound is chosen so the power law has mean
/// closest to mean_k.
struct LfrConfig {
  NodeId n_nodes = 1000;
  double degree_exponent = 2.0;
  double mean_k = 20.0;
  int max_k = 50;
  double size_exponent = 1.0;
  int size_min = 10;
  int size_max = 50;
  double mu = 0.1;
  std::uint64_t seed = 0;
};

PlantedGraph gen_lfr_style(const LfrConfig& cfg);

/// Multiscale graph: a 10-clique, a 20-clique, then G(n, 20/n) components of
/// sizes 40, 80, 160, ..., with one random bridge between consecutive components.
PlantedGraph gen_multiscale(int n_components, std::uint64_t seed);

/// Component sizes used by gen_multiscale.
std::vector<NodeId> multiscale_sizes(int n_components);

}  // namespace graphtension
