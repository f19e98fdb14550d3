#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "graphtension/random.hpp"

namespace graphtension {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable simple undirected unweighted graph in CSR form.
///
/// Self-loops and duplicate edges are dropped at construction, so the
/// adjacency matrix is symmetric 0/1 with zero diagonal.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `n_nodes` nodes. Edge endpoints must lie in [0, n_nodes).
  static Graph from_edges(NodeId n_nodes, std::span<const Edge> edges);

  NodeId n_nodes() const noexcept { return static_cast<NodeId>(degrees_.size()); }
  std::int64_t n_edges() const noexcept { return static_cast<std::int64_t>(neighbors_.size() / 2); }
  /// Sum of degrees (2m).
  double two_m() const noexcept { return static_cast<double>(neighbors_.size()); }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }
  NodeId degree(NodeId i) const { return static_cast<NodeId>(offsets_[i + 1] - offsets_[i]); }
  /// Degrees as reals, the form in which they enter volumes.
  std::span<const double> degrees() const noexcept { return degrees_; }

  bool has_edge(NodeId i, NodeId j) const;
  /// Each undirected edge once, with first < second, in ascending order.
  std::vector<Edge> edges() const;

  Eigen::SparseMatrix<double, Eigen::RowMajor> adjacency_matrix() const;
  Eigen::SparseMatrix<double, Eigen::RowMajor> laplacian_matrix() const;

  /// Y = A X for a dense N x c block.
  Eigen::MatrixXd multiply_adjacency(const Eigen::MatrixXd& x) const;
  /// Y = (diag(k) - A) X for a dense N x c block.
  Eigen::MatrixXd multiply_laplacian(const Eigen::MatrixXd& x) const;

 private:
  std::vector<std::int64_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<double> degrees_;
};

/// Degrees and total degree used for volume terms.
///
/// For a whole graph this is the graph's own degree sequence; when a solver
/// runs on an induced subgraph it carries the parent graph's degrees of the
/// retained nodes and the parent's 2m.
struct DegreeModel {
  std::span<const double> degrees;
  double two_m = 0.0;

  static DegreeModel of(const Graph& g) { return {g.degrees(), g.two_m()}; }
};

/// Hard assignment of every node to one of `n_hat` communities.
///
/// Labels are 0-based in memory; partition files use 1-based community ids.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::int32_t> labels, int n_hat);

  static Partition single(NodeId n_nodes);
  static Partition uniform_random(NodeId n_nodes, int n_hat, Rng& rng);

  std::size_t size() const noexcept { return labels_.size(); }
  int n_hat() const noexcept { return n_hat_; }
  std::int32_t operator[](std::size_t i) const { return labels_[i]; }
  std::span<const std::int32_t> labels() const noexcept { return labels_; }

  void assign(std::size_t i, std::int32_t label);

  std::vector<std::int64_t> community_sizes() const;
  int count_nonempty() const;
  /// Relabels nonempty communities to 0..K-1 in order of first appearance.
  Partition compacted() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::int32_t> labels_;
  int n_hat_ = 0;
};

/// Cut matrix, volumes, and per-node neighbor counts by community.
///
/// cut(a, b) sums A_ij over ordered pairs with g_i = a, g_j = b, so an
/// intra-community edge counts twice in cut(a, a).
struct PartitionStats {
  Eigen::MatrixXd cut;  // n_hat x n_hat
  Eigen::VectorXd vol;  // n_hat
  Eigen::MatrixXd x;    // N x n_hat, X = A U
};

PartitionStats partition_stats(const Graph& g, const Partition& p, const DegreeModel& model);
inline PartitionStats partition_stats(const Graph& g, const Partition& p) {
  return partition_stats(g, p, DegreeModel::of(g));
}

/// N x n_hat indicator matrix U with U(i, g_i) = 1.
Eigen::MatrixXd indicator_matrix(const Partition& p);

struct Subgraph {
  Graph graph;
  std::vector<NodeId> to_global;  // local id -> parent id
};

/// Subgraph on `nodes` (deduplicated, kept in ascending order) with every internal edge.
Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Edge list: two whitespace-separated 0-based ids per line, '#' starts a comment line.
Graph load_edge_list(std::istream& in, NodeId min_nodes = 0);
void write_edge_list(std::ostream& out, const Graph& g);

/// Partition file: "node_id community_id" per line, 0-based nodes, 1-based communities.
Partition load_partition(std::istream& in, NodeId n_nodes);
void write_partition(std::ostream& out, const Partition& p);

}  // namespace graphtension
