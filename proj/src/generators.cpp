#include "graphtension/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "graphtension/error.hpp"
#include "graphtension/random.hpp"

namespace graphtension {

namespace {

std::discrete_distribution<int> power_law(int lo, int hi, double exponent) {
  std::vector<double> w;
  for (int k = lo; k <= hi; ++k) w.push_back(std::pow(static_cast<double>(k), -exponent));
  return std::discrete_distribution<int>(w.begin(), w.end());
}

double power_law_mean(int lo, int hi, double exponent) {
  double num = 0.0, den = 0.0;
  for (int k = lo; k <= hi; ++k) {
    const double p = std::pow(static_cast<double>(k), -exponent);
    num += k * p;
    den += p;
  }
  return num / den;
}

}  // namespace

int pp_default_k_max(NodeId n_nodes, int k_min, double degree_exponent) {
  const int cap = 300;
  if (k_min >= cap) return k_min;
  const double mean = power_law_mean(k_min, cap, degree_exponent);
  const auto cutoff = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_nodes) * mean)));
  return std::clamp(cutoff, k_min, cap);
}

PlantedGraph gen_pp(const PpConfig& cfg) {
  const NodeId n = cfg.n_nodes;
  const int n_hat = cfg.n_hat;
  if (n < 1 || n_hat < 1 || n_hat > n) throw ConfigError("pp: need 1 <= n_hat <= N");
  const int k_max = cfg.k_max > 0 ? cfg.k_max : pp_default_k_max(n, cfg.k_min, cfg.degree_exponent);
  if (cfg.k_min < 1 || k_max < cfg.k_min || k_max >= n)
    throw ConfigError("pp: degree bounds need 1 <= k_min <= k_max < N");
  double w_in = cfg.omega_in, w_out = cfg.omega_out;
  if (cfg.lambda >= 0.0) {
    if (cfg.lambda > 1.0) throw ConfigError("pp: lambda must lie in [0, 1]");
    w_in = cfg.lambda * n_hat + 1.0 - cfg.lambda;
    w_out = 1.0 - cfg.lambda;
  } else {
    if (!(w_out >= 0.0) || !(w_in >= w_out) || !(w_in > 0.0))
      throw ConfigError("pp: need omega_in >= omega_out >= 0 and omega_in > 0");
    if (cfg.normalize) {
      const double s = n_hat / (w_in + (n_hat - 1) * w_out);
      w_in *= s;
      w_out *= s;
    }
  }

  Rng rng(cfg.seed);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
  std::vector<std::vector<NodeId>> blocks(static_cast<std::size_t>(n_hat));
  {
    const NodeId base = n / n_hat, rem = n % n_hat;
    NodeId i = 0;
    for (int c = 0; c < n_hat; ++c)
      for (NodeId j = 0; j < base + (c < rem ? 1 : 0); ++j, ++i) {
        labels[i] = c;
        blocks[c].push_back(i);
      }
  }
  auto deg_dist = power_law(cfg.k_min, k_max, cfg.degree_exponent);
  std::vector<double> k(static_cast<std::size_t>(n));
  for (auto& v : k) v = cfg.k_min + deg_dist(rng);
  const double total = std::accumulate(k.begin(), k.end(), 0.0);

  std::vector<double> kappa(static_cast<std::size_t>(n_hat), 0.0);
  std::vector<std::discrete_distribution<std::size_t>> pick;
  for (int c = 0; c < n_hat; ++c) {
    std::vector<double> w;
    for (NodeId i : blocks[c]) {
      w.push_back(k[i]);
      kappa[c] += k[i];
    }
    pick.emplace_back(w.begin(), w.end());
  }

  std::vector<Edge> edges;
  for (int r = 0; r < n_hat; ++r)
    for (int s = r; s < n_hat; ++s) {
      const double omega = r == s ? w_in : w_out;
      const double mean = omega * kappa[r] * kappa[s] / total / (r == s ? 2.0 : 1.0);
      if (mean <= 0.0) continue;
      std::poisson_distribution<long long> count(mean);
      const long long m = count(rng);
      for (long long e = 0; e < m; ++e) {
        const NodeId a = blocks[r][pick[r](rng)];
        const NodeId b = blocks[s][pick[s](rng)];
        if (a != b) edges.push_back({a, b});
      }
    }

  PlantedGraph out;
  out.graph = Graph::from_edges(n, edges);
  out.reference = Partition(std::move(labels), n_hat);
  out.params = {{"n_nodes", n},          {"n_hat", n_hat},      {"degree_exponent", cfg.degree_exponent},
                {"k_min", cfg.k_min},    {"k_max", k_max},  {"omega_in", w_in},
                {"omega_out", w_out},    {"lambda", cfg.lambda}, {"seed", static_cast<double>(cfg.seed)},
                {"mean_k_target", total / n}};
  return out;
}

PlantedGraph gen_lfr_style(const LfrConfig& cfg) {
  const NodeId n = cfg.n_nodes;
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) throw ConfigError("lfr: mu must lie in [0, 1]");
  if (cfg.size_min < 2 || cfg.size_max < cfg.size_min || cfg.size_min > n)
    throw ConfigError("lfr: community sizes need 2 <= size_min <= size_max and size_min <= N");
  if (cfg.max_k < 1 || cfg.max_k >= n) throw ConfigError("lfr: need 1 <= max_k < N");
  if (!(cfg.mean_k >= 1.0 && cfg.mean_k <= cfg.max_k)) throw ConfigError("lfr: need 1 <= mean_k <= max_k");
  Rng rng(cfg.seed);

  int k_min = 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int lo = 1; lo <= cfg.max_k; ++lo) {
    const double gap = std::abs(power_law_mean(lo, cfg.max_k, cfg.degree_exponent) - cfg.mean_k);
    if (gap < best_gap) {
      best_gap = gap;
      k_min = lo;
    }
  }
  auto deg_dist = power_law(k_min, cfg.max_k, cfg.degree_exponent);
  std::vector<int> k(static_cast<std::size_t>(n));
  for (auto& v : k) v = k_min + deg_dist(rng);

  // Community sizes: power law on [size_min, size_max] until N is covered.
  auto size_dist = power_law(cfg.size_min, cfg.size_max, cfg.size_exponent);
  std::vector<int> sizes;
  NodeId covered = 0;
  while (covered < n) {
    const int s = cfg.size_min + size_dist(rng);
    if (covered + s <= n) {
      sizes.push_back(s);
      covered += s;
      continue;
    }
    int rest = static_cast<int>(n - covered);
    if (rest >= cfg.size_min) {
      sizes.push_back(rest);
    } else {
      std::vector<std::size_t> open;
      for (std::size_t c = 0; c < sizes.size(); ++c)
        if (sizes[c] < cfg.size_max) open.push_back(c);
      while (rest > 0 && !open.empty()) {
        std::uniform_int_distribution<std::size_t> u(0, open.size() - 1);
        const std::size_t j = u(rng);
        ++sizes[open[j]];
        --rest;
        if (sizes[open[j]] >= cfg.size_max) open.erase(open.begin() + static_cast<std::ptrdiff_t>(j));
      }
      if (rest > 0) throw ConfigError("lfr: community sizes cannot cover N");
    }
    covered = n;
  }
  const int n_comm = static_cast<int>(sizes.size());

  // Nodes by decreasing degree go to a random community that still has room
  // and is large enough to host their internal degree.
  std::vector<int> internal(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i)
    internal[i] = static_cast<int>(std::ceil((1.0 - cfg.mu) * k[i] - 1e-9));
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return k[a] > k[b]; });
  std::vector<int> room(sizes.begin(), sizes.end());
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> feasible;
  for (NodeId i : order) {
    feasible.clear();
    for (int c = 0; c < n_comm; ++c)
      if (room[c] > 0 && sizes[c] - 1 >= internal[i]) feasible.push_back(c);
    if (feasible.empty())
      for (int c = 0; c < n_comm; ++c)
        if (room[c] > 0) feasible.push_back(c);
    std::uniform_int_distribution<std::size_t> u(0, feasible.size() - 1);
    const int c = feasible[u(rng)];
    labels[i] = c;
    --room[c];
  }
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(n_comm));
  for (NodeId i = 0; i < n; ++i) members[labels[i]].push_back(i);
  // Internal stubs beyond the community size are dropped rather than turned external.
  std::vector<int> external(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    external[i] = k[i] - internal[i];
    internal[i] = std::min(internal[i], static_cast<int>(members[labels[i]].size()) - 1);
  }

  // Stubs are paired at random; a pair that is a self-loop, repeats an edge,
  // or (for external stubs) stays inside one community swaps partners with a
  // random pair when that makes both pairs acceptable.
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  auto pair_up = [&](std::vector<NodeId>& stubs, bool external) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    const std::size_t pairs = stubs.size() / 2;
    auto ok = [&](NodeId a, NodeId b) {
      return a != b && !(external && labels[a] == labels[b]) && !seen.contains(key(a, b));
    };
    std::vector<char> placed(pairs, 0);
    for (int round = 0; round < 20; ++round) {
      bool pending = false;
      for (std::size_t p = 0; p < pairs; ++p) {
        if (placed[p]) continue;
        NodeId& a = stubs[2 * p];
        NodeId& b = stubs[2 * p + 1];
        if (!ok(a, b) && pairs > 1) {
          std::uniform_int_distribution<std::size_t> u(0, pairs - 1);
          const std::size_t q = u(rng);
          if (q != p && !placed[q]) {
            NodeId& c = stubs[2 * q];
            NodeId& d = stubs[2 * q + 1];
            if (ok(a, d) && ok(c, b) && key(a, d) != key(c, b)) std::swap(b, d);
          }
        }
        if (ok(a, b)) {
          seen.insert(key(a, b));
          edges.push_back({a, b});
          placed[p] = 1;
        } else {
          pending = true;
        }
      }
      if (!pending) break;
    }
  };
  for (int c = 0; c < n_comm; ++c) {
    std::vector<NodeId> stubs;
    for (NodeId i : members[c]) stubs.insert(stubs.end(), static_cast<std::size_t>(internal[i]), i);
    if (stubs.size() % 2 == 1) {
      std::uniform_int_distribution<std::size_t> u(0, members[c].size() - 1);
      stubs.push_back(members[c][u(rng)]);
      spdlog::debug("lfr: odd internal stub count in community {}; added one stub", c);
    }
    pair_up(stubs, false);
  }

  std::vector<NodeId> ext;
  for (NodeId i = 0; i < n; ++i) ext.insert(ext.end(), static_cast<std::size_t>(external[i]), i);
  if (ext.size() % 2 == 1) {
    std::uniform_int_distribution<NodeId> u(0, n - 1);
    ext.push_back(u(rng));
    spdlog::debug("lfr: odd external stub count; added one stub");
  }
  pair_up(ext, true);

  PlantedGraph out;
  out.graph = Graph::from_edges(n, edges);
  out.reference = Partition(std::move(labels), n_comm);
  out.params = {{"n_nodes", n},
                {"degree_exponent", cfg.degree_exponent},
                {"mean_k", cfg.mean_k},
                {"max_k", cfg.max_k},
                {"k_min", k_min},
                {"size_exponent", cfg.size_exponent},
                {"size_min", cfg.size_min},
                {"size_max", cfg.size_max},
                {"mu", cfg.mu},
                {"seed", static_cast<double>(cfg.seed)}};
  return out;
}

std::vector<NodeId> multiscale_sizes(int n_components) {
  std::vector<NodeId> sizes;
  for (int c = 0; c < n_components; ++c) sizes.push_back(c == 0 ? 10 : c == 1 ? 20 : NodeId{40} << (c - 2));
  return sizes;
}

PlantedGraph gen_multiscale(int n_components, std::uint64_t seed) {
  if (n_components < 2) throw ConfigError("ms: need at least 2 components");
  if (n_components > 22) throw ConfigError("ms: too many components");
  Rng rng(seed);
  const auto sizes = multiscale_sizes(n_components);
  const NodeId n = std::accumulate(sizes.begin(), sizes.end(), NodeId{0});
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
  std::vector<NodeId> start;
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  NodeId offset = 0;
  for (int c = 0; c < n_components; ++c) {
    const NodeId s = sizes[c];
    start.push_back(offset);
    for (NodeId i = 0; i < s; ++i) labels[offset + i] = c;
    if (c < 2) {
      for (NodeId i = 0; i < s; ++i)
        for (NodeId j = i + 1; j < s; ++j) edges.push_back({offset + i, offset + j});
    } else {
      // G(n, p) by geometric skipping over the upper triangle.
      const double p = 20.0 / s;
      const double log_q = std::log(1.0 - p);
      NodeId v = 1, w = -1;
      while (v < s) {
        const double r = unif(rng);
        w += 1 + static_cast<NodeId>(std::floor(std::log(1.0 - r) / log_q));
        while (w >= v && v < s) {
          w -= v;
          ++v;
        }
        if (v < s) edges.push_back({offset + v, offset + w});
      }
    }
    offset += s;
  }
  for (int c = 0; c + 1 < n_components; ++c) {
    std::uniform_int_distribution<NodeId> a(0, sizes[c] - 1), b(0, sizes[c + 1] - 1);
    edges.push_back({start[c] + a(rng), start[c + 1] + b(rng)});
  }
  PlantedGraph out;
  out.graph = Graph::from_edges(n, edges);
  out.reference = Partition(std::move(labels), n_components);
  out.params = {{"n_components", n_components}, {"seed", static_cast<double>(seed)}};
  return out;
}

}  // namespace graphtension
