#include "graphtension/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "graphtension/error.hpp"

namespace graphtension {

Graph Graph::from_edges(NodeId n_nodes, std::span<const Edge> edges) {
  if (n_nodes < 0) throw InputError("negative node count");
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") outside node range");
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
  g.neighbors_.reserve(directed.size());
  for (auto [u, v] : directed) {
    ++g.offsets_[u + 1];
    g.neighbors_.push_back(v);
  }
  for (NodeId i = 0; i < n_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.degrees_.resize(n_nodes);
  for (NodeId i = 0; i < n_nodes; ++i)
    g.degrees_[i] = static_cast<double>(g.offsets_[i + 1] - g.offsets_[i]);
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(n_edges()));
  for (NodeId i = 0; i < n_nodes(); ++i)
    for (NodeId j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> Graph::adjacency_matrix() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(neighbors_.size());
  for (NodeId i = 0; i < n_nodes(); ++i)
    for (NodeId j : neighbors(i)) t.emplace_back(i, j, 1.0);
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(n_nodes(), n_nodes());
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> Graph::laplacian_matrix() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(neighbors_.size() + degrees_.size());
  for (NodeId i = 0; i < n_nodes(); ++i) {
    if (degrees_[i] > 0) t.emplace_back(i, i, degrees_[i]);
    for (NodeId j : neighbors(i)) t.emplace_back(i, j, -1.0);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> l(n_nodes(), n_nodes());
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

Eigen::MatrixXd Graph::multiply_adjacency(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double* in = x.col(c).data();
    double* out = y.col(c).data();
    for (NodeId i = 0; i < n_nodes(); ++i) {
      double s = 0.0;
      for (NodeId j : neighbors(i)) s += in[j];
      out[i] = s;
    }
  }
  return y;
}

Eigen::MatrixXd Graph::multiply_laplacian(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double* in = x.col(c).data();
    double* out = y.col(c).data();
    for (NodeId i = 0; i < n_nodes(); ++i) {
      double s = degrees_[i] * in[i];
      for (NodeId j : neighbors(i)) s -= in[j];
      out[i] = s;
    }
  }
  return y;
}

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<std::int32_t> labels, int n_hat)
    : labels_(std::move(labels)), n_hat_(n_hat) {
  if (n_hat_ < 1) throw ContractViolation("partition needs n_hat >= 1");
  for (auto l : labels_)
    if (l < 0 || l >= n_hat_) throw ContractViolation("partition label out of range");
}

Partition Partition::single(NodeId n_nodes) {
  return Partition(std::vector<std::int32_t>(static_cast<std::size_t>(n_nodes), 0), 1);
}

Partition Partition::uniform_random(NodeId n_nodes, int n_hat, Rng& rng) {
  if (n_hat < 1) throw ContractViolation("partition needs n_hat >= 1");
  std::uniform_int_distribution<std::int32_t> pick(0, n_hat - 1);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n_nodes));
  for (auto& l : labels) l = pick(rng);
  return Partition(std::move(labels), n_hat);
}

void Partition::assign(std::size_t i, std::int32_t label) {
  if (i >= labels_.size()) throw ContractViolation("node out of range");
  if (label < 0 || label >= n_hat_) throw ContractViolation("partition label out of range");
  labels_[i] = label;
}

std::vector<std::int64_t> Partition::community_sizes() const {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(n_hat_), 0);
  for (auto l : labels_) ++sizes[l];
  return sizes;
}

int Partition::count_nonempty() const {
  auto sizes = community_sizes();
  return static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }));
}

Partition Partition::compacted() const {
  std::vector<std::int32_t> remap(static_cast<std::size_t>(n_hat_), -1);
  std::vector<std::int32_t> out(labels_.size());
  std::int32_t next = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& r = remap[labels_[i]];
    if (r < 0) r = next++;
    out[i] = r;
  }
  return Partition(std::move(out), std::max(next, 1));
}

// ---------------------------------------------------------------------------

PartitionStats partition_stats(const Graph& g, const Partition& p, const DegreeModel& model) {
  const auto n = g.n_nodes();
  if (p.size() != static_cast<std::size_t>(n))
    throw ContractViolation("partition size does not match graph");
  if (model.degrees.size() != static_cast<std::size_t>(n))
    throw ContractViolation("degree model size does not match graph");
  const int k = p.n_hat();
  PartitionStats s;
  s.cut = Eigen::MatrixXd::Zero(k, k);
  s.vol = Eigen::VectorXd::Zero(k);
  s.x = Eigen::MatrixXd::Zero(n, k);
  for (NodeId i = 0; i < n; ++i) {
    const auto gi = p[i];
    s.vol[gi] += model.degrees[i];
    for (NodeId j : g.neighbors(i)) s.x(i, p[j]) += 1.0;
  }
  for (NodeId i = 0; i < n; ++i) s.cut.row(p[i]) += s.x.row(i);
  return s;
}

Eigen::MatrixXd indicator_matrix(const Partition& p) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.size()), p.n_hat());
  for (std::size_t i = 0; i < p.size(); ++i) u(static_cast<Eigen::Index>(i), p[i]) = 1.0;
  return u;
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw InputError("induced subgraph of an empty node set");
  Subgraph sub;
  sub.to_global.assign(nodes.begin(), nodes.end());
  std::sort(sub.to_global.begin(), sub.to_global.end());
  sub.to_global.erase(std::unique(sub.to_global.begin(), sub.to_global.end()), sub.to_global.end());
  if (sub.to_global.front() < 0 || sub.to_global.back() >= g.n_nodes())
    throw InputError("induced subgraph node out of range");

  std::vector<NodeId> local(static_cast<std::size_t>(g.n_nodes()), -1);
  for (std::size_t i = 0; i < sub.to_global.size(); ++i)
    local[sub.to_global[i]] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sub.to_global.size(); ++i)
    for (NodeId j : g.neighbors(sub.to_global[i])) {
      const NodeId lj = local[j];
      if (lj > static_cast<NodeId>(i)) edges.emplace_back(static_cast<NodeId>(i), lj);
    }
  sub.graph = Graph::from_edges(static_cast<NodeId>(sub.to_global.size()), edges);
  return sub;
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits a data line into exactly two integer fields.
std::pair<long long, long long> parse_pair(std::string_view line, std::size_t line_no) {
  long long vals[2];
  std::size_t pos = 0;
  for (int f = 0; f < 2; ++f) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const char* first = line.data() + pos;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, vals[f]);
    if (ec != std::errc() || ptr == first || (ptr != last && *ptr != ' ' && *ptr != '\t'))
      throw ParseError(line_no, "expected two integers, got '" + std::string(line) + "'");
    pos = static_cast<std::size_t>(ptr - line.data());
  }
  if (!trim(line.substr(pos)).empty())
    throw ParseError(line_no, "trailing data in '" + std::string(line) + "'");
  return {vals[0], vals[1]};
}

template <typename F>
void for_each_data_line(std::istream& in, F&& f) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    f(line, line_no);
  }
}

}  // namespace

Graph load_edge_list(std::istream& in, NodeId min_nodes) {
  std::vector<Edge> edges;
  long long max_id = static_cast<long long>(min_nodes) - 1;
  for_each_data_line(in, [&](std::string_view line, std::size_t line_no) {
    auto [u, v] = parse_pair(line, line_no);
    if (u < 0 || v < 0)
      throw InputError("line " + std::to_string(line_no) + ": negative node id");
    if (u > INT32_MAX - 1 || v > INT32_MAX - 1)
      throw InputError("line " + std::to_string(line_no) + ": node id too large");
    max_id = std::max({max_id, u, v});
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  });
  return Graph::from_edges(static_cast<NodeId>(max_id + 1), edges);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.n_nodes() << " edges " << g.n_edges() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Partition load_partition(std::istream& in, NodeId n_nodes) {
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n_nodes), -1);
  long long n_hat = 1;
  for_each_data_line(in, [&](std::string_view line, std::size_t line_no) {
    auto [node, community] = parse_pair(line, line_no);
    if (node < 0 || node >= n_nodes)
      throw InputError("line " + std::to_string(line_no) + ": node id out of range");
    if (community < 1 || community > INT32_MAX)
      throw InputError("line " + std::to_string(line_no) + ": community ids are 1-based");
    if (labels[node] >= 0)
      throw InputError("line " + std::to_string(line_no) + ": node listed twice");
    labels[node] = static_cast<std::int32_t>(community - 1);
    n_hat = std::max(n_hat, community);
  });
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0) throw InputError("partition file misses node " + std::to_string(i));
  return Partition(std::move(labels), static_cast<int>(n_hat));
}

void write_partition(std::ostream& out, const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) out << i << ' ' << p[i] + 1 << '\n';
}

}  // namespace graphtension
