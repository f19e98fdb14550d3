#include "graphtension/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <spdlog/spdlog.h>

#include "graphtension/error.hpp"

namespace graphtension {

namespace {

bool improves(double candidate, double current) {
  return candidate < current - 1e-12 * (1.0 + std::abs(current));
}

double profile_of(const Graph& g, const DegreeModel& model, const Partition& p) {
  return profile_energy(partition_stats(g, p, model), model.two_m);
}

// Cut and volume after merging community b into a (labels above b shift down).
PartitionStats merged_stats(const PartitionStats& s, int a, int b) {
  const auto n = s.cut.rows();
  auto idx = [&](Eigen::Index c) { return c == b ? a : (c > b ? c - 1 : c); };
  PartitionStats out;
  out.cut = Eigen::MatrixXd::Zero(n - 1, n - 1);
  out.vol = Eigen::VectorXd::Zero(n - 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    out.vol[idx(r)] += s.vol[r];
    for (Eigen::Index c = 0; c < n; ++c) out.cut(idx(r), idx(c)) += s.cut(r, c);
  }
  return out;
}

double profile_term(double cut, double vv, double two_m) {
  return cut > 0.0 && vv > 0.0 ? cut * (1.0 - std::log(two_m * cut / vv)) : 0.0;
}

// Change of the optimal-W energy when node i moves from a to b. Only rows and
// columns a and b of the cut matrix change.
double profile_move_delta(const PartitionStats& s, const DegreeModel& model, NodeId i, int a, int b) {
  const double k = model.degrees[i], tm = model.two_m;
  const auto x = s.x.row(i);
  const double va = s.vol[a] - k, vb = s.vol[b] + k;
  double d = profile_term(s.cut(a, a) - 2.0 * x[a], va * va, tm) - profile_term(s.cut(a, a), s.vol[a] * s.vol[a], tm) +
             profile_term(s.cut(b, b) + 2.0 * x[b], vb * vb, tm) - profile_term(s.cut(b, b), s.vol[b] * s.vol[b], tm) +
             2.0 * (profile_term(s.cut(a, b) + x[a] - x[b], va * vb, tm) -
                    profile_term(s.cut(a, b), s.vol[a] * s.vol[b], tm));
  for (Eigen::Index c = 0; c < s.cut.rows(); ++c) {
    if (c == a || c == b) continue;
    d += 2.0 * (profile_term(s.cut(a, c) - x[c], va * s.vol[c], tm) - profile_term(s.cut(a, c), s.vol[a] * s.vol[c], tm) +
                profile_term(s.cut(b, c) + x[c], vb * s.vol[c], tm) - profile_term(s.cut(b, c), s.vol[b] * s.vol[c], tm));
  }
  return d;
}

void apply_stats_move(const Graph& g, const DegreeModel& model, PartitionStats& s, NodeId i, int from, int to) {
  const double k = model.degrees[i];
  s.vol[from] -= k;
  s.vol[to] += k;
  const Eigen::RowVectorXd xi = s.x.row(i);
  s.cut.row(from) -= xi;
  s.cut.col(from) -= xi.transpose();
  s.cut.row(to) += xi;
  s.cut.col(to) += xi.transpose();
  for (NodeId j : g.neighbors(i)) {
    s.x(j, from) -= 1.0;
    s.x(j, to) += 1.0;
  }
}

std::vector<std::vector<NodeId>> members_of(const Partition& p) {
  std::vector<std::vector<NodeId>> m(static_cast<std::size_t>(p.n_hat()));
  for (std::size_t i = 0; i < p.size(); ++i) m[p[i]].push_back(static_cast<NodeId>(i));
  return m;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (cfg.n_hat_expected < 1) throw ConfigError("pipeline: n_hat_expected must be >= 1");
  if (!(cfg.penalty_coeff >= 0.0)) throw ConfigError("pipeline: penalty coefficient must be >= 0");
  if (!(cfg.inf_reset_factor > 1.0)) throw ConfigError("pipeline: inf reset factor must exceed 1");
  if (cfg.em_max_rounds < 1) throw ConfigError("pipeline: em_max_rounds must be >= 1");
}

double penalized_objective(double energy, int n_hat, int n_hat_expected, double penalty_coeff) {
  const double d = static_cast<double>(n_hat - n_hat_expected);
  return energy + penalty_coeff * d * d * std::abs(energy);
}

EmResult em_fit(const Graph& g, const DegreeModel& model, int n_hat, const PipelineConfig& cfg,
                const Partition* initial, SpectrumCache* cache) {
  validate(cfg);
  if (n_hat < 1) throw ContractViolation("em_fit: n_hat must be >= 1");
  EmResult r;
  if (n_hat == 1) {
    r.partition = Partition::single(g.n_nodes());
    const PartitionStats stats = partition_stats(g, r.partition, model);
    r.w = optimal_w(stats, model.two_m);
    r.energy = profile_energy(stats, model.two_m);
    r.trace = {r.energy};
    r.rounds = 1;
    return r;
  }

  SpectrumCache local(g, cfg.settings.ac.eig_tol, derive_seed(cfg.seed, 0x5ec));
  if (!cache) cache = &local;

  Partition current;
  bool have = false;
  double best = kInf;
  AffinityMatrix w_solve = AffinityMatrix::constant(n_hat, 0.0, -std::log(0.1));
  if (initial) {
    if (initial->n_hat() != n_hat || initial->size() != static_cast<std::size_t>(g.n_nodes()))
      throw ContractViolation("em_fit: initial partition does not match");
    current = *initial;
    have = true;
    const PartitionStats stats = partition_stats(g, current, model);
    best = profile_energy(stats, model.two_m);
    r.trace.push_back(best);
    w_solve = optimal_w(stats, model.two_m).with_infinities_reset(cfg.inf_reset_factor);
  }

  for (int round = 0; round < cfg.em_max_rounds; ++round) {
    const Partition* start = have && !cfg.em_rerandomize ? &current : nullptr;
    SolveResult res = run_solver(cfg.solver, cfg.settings, g, model, w_solve, n_hat,
                                 derive_seed(cfg.seed, static_cast<std::uint64_t>(round) + 1), start, cache);
    ++r.rounds;
    const PartitionStats stats = partition_stats(g, res.partition, model);
    const double e = profile_energy(stats, model.two_m);
    if (have && !improves(e, best)) break;
    current = std::move(res.partition);
    have = true;
    best = e;
    r.trace.push_back(e);
    w_solve = optimal_w(stats, model.two_m).with_infinities_reset(cfg.inf_reset_factor);
  }
  r.w = optimal_w(g, model, current);
  r.partition = std::move(current);
  r.energy = best;
  return r;
}

Partition greedy_merge(const Graph& g, const DegreeModel& model, const Partition& p, const PipelineConfig& cfg) {
  Partition q = p.compacted();
  int n = q.n_hat();
  if (n <= 1) return q;
  std::vector<std::int32_t> labels(q.labels().begin(), q.labels().end());
  PartitionStats stats = partition_stats(g, q, model);
  double current = penalized_objective(profile_energy(stats, model.two_m), n, cfg.n_hat_expected, cfg.penalty_coeff);
  while (n > 1) {
    double best = current;
    int ba = -1, bb = -1;
    PartitionStats best_stats;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        PartitionStats m = merged_stats(stats, a, b);
        const double qv = penalized_objective(profile_energy(m, model.two_m), n - 1, cfg.n_hat_expected,
                                              cfg.penalty_coeff);
        if (improves(qv, best)) {
          best = qv;
          ba = a;
          bb = b;
          best_stats = std::move(m);
        }
      }
    if (ba < 0) break;
    for (auto& l : labels) {
      if (l == bb) l = ba;
      else if (l > bb) --l;
    }
    --n;
    stats = std::move(best_stats);
    current = best;
  }
  return Partition(std::move(labels), n);
}

DetectResult split_merge(const Graph& g, const PipelineConfig& cfg) {
  validate(cfg);
  const NodeId n_nodes = g.n_nodes();
  const DegreeModel model = DegreeModel::of(g);
  auto objective = [&](const Partition& x, double& e) {
    e = profile_of(g, model, x);
    return penalized_objective(e, x.count_nonempty(), cfg.n_hat_expected, cfg.penalty_coeff);
  };

  DetectResult out;
  out.partition = Partition::single(n_nodes);
  out.objective = objective(out.partition, out.energy);
  out.accepted.push_back(out.objective);
  const int n_split =
      std::max(2, std::min(cfg.n_hat_expected, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_nodes))))));

  std::deque<std::vector<NodeId>> queue;
  queue.push_back(members_of(out.partition).front());
  std::uint64_t counter = 0;
  while (!queue.empty()) {
    const std::vector<NodeId> members = std::move(queue.front());
    queue.pop_front();
    if (members.size() < 2) continue;
    const int k = static_cast<int>(std::min<std::size_t>(n_split, members.size()));
    const Subgraph sub = induced_subgraph(g, members);
    std::vector<double> sub_deg(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) sub_deg[j] = model.degrees[members[j]];
    const DegreeModel sub_model{sub_deg, model.two_m};
    PipelineConfig sub_cfg = cfg;
    sub_cfg.seed = derive_seed(cfg.seed, ++counter);

    EmResult em;
    try {
      em = em_fit(sub.graph, sub_model, k, sub_cfg);
    } catch (const DegenerateInputError& e) {
      spdlog::debug("split_merge: skipping split of {} nodes: {}", members.size(), e.what());
      continue;
    }

    const int base = out.partition.n_hat();
    std::vector<std::int32_t> labels(out.partition.labels().begin(), out.partition.labels().end());
    const int c = out.partition[members.front()];
    for (std::size_t j = 0; j < members.size(); ++j) {
      const int l = em.partition[j];
      labels[members[j]] = l == 0 ? c : base + l - 1;
    }
    const Partition candidate = greedy_merge(g, model, Partition(std::move(labels), base + k - 1), cfg);
    double e = 0.0;
    const double q = objective(candidate, e);
    if (!improves(q, out.objective)) continue;

    const auto old_sets = members_of(out.partition);
    const std::set<std::vector<NodeId>> old_set(old_sets.begin(), old_sets.end());
    const auto new_sets = members_of(candidate);
    const std::set<std::vector<NodeId>> new_set(new_sets.begin(), new_sets.end());
    std::deque<std::vector<NodeId>> next;
    for (auto& s : queue)
      if (new_set.count(s)) next.push_back(std::move(s));
    for (const auto& s : new_sets)
      if (!s.empty() && !old_set.count(s)) next.push_back(s);
    queue = std::move(next);

    out.partition = candidate;
    out.energy = e;
    out.objective = q;
    out.accepted.push_back(q);
    spdlog::debug("split_merge: accepted {} communities, Q = {}", candidate.n_hat(), q);
  }
  out.w = optimal_w(g, model, out.partition);
  return out;
}

DetectResult detect(const Graph& g, const PipelineConfig& cfg) {
  DetectResult r = split_merge(g, cfg);
  if (!cfg.polish || r.partition.n_hat() < 2) return r;
  const DegreeModel model = DegreeModel::of(g);
  PipelineConfig polish_cfg = cfg;
  polish_cfg.seed = derive_seed(cfg.seed, 0xe11);
  const EmResult em = em_fit(g, model, r.partition.n_hat(), polish_cfg, &r.partition);
  const Partition p = em.partition.compacted();
  double e = 0.0;
  e = profile_of(g, model, p);
  const double q = penalized_objective(e, p.n_hat(), cfg.n_hat_expected, cfg.penalty_coeff);
  if (improves(q, r.objective)) {
    r.partition = p;
    r.energy = e;
    r.objective = q;
    r.w = optimal_w(g, model, p);
    r.accepted.push_back(q);
  }
  return r;
}

DetectResult detect_fixed(const Graph& g, int n_hat, const PipelineConfig& cfg) {
  const DegreeModel model = DegreeModel::of(g);
  const EmResult em = em_fit(g, model, n_hat, cfg);
  DetectResult r;
  r.partition = em.partition.compacted();
  r.energy = profile_of(g, model, r.partition);
  r.objective = penalized_objective(r.energy, r.partition.n_hat(), cfg.n_hat_expected, cfg.penalty_coeff);
  r.w = optimal_w(g, model, r.partition);
  r.accepted = {r.objective};
  return r;
}

Partition kl_baseline(const Graph& g, int n_hat, std::uint64_t seed, int max_passes) {
  if (n_hat < 1) throw ContractViolation("kl_baseline: n_hat must be >= 1");
  Rng rng(seed);
  Partition p = Partition::uniform_random(g.n_nodes(), n_hat, rng);
  const DegreeModel model = DegreeModel::of(g);
  if (n_hat == 1 || model.two_m == 0.0) return p;
  const NodeId n = g.n_nodes();

  for (int pass = 0; pass < max_passes; ++pass) {
    PartitionStats stats = partition_stats(g, p, model);
    const double start = profile_energy(stats, model.two_m);
    Partition cur = p;
    std::vector<char> moved(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<NodeId, int>> log;
    double run = 0.0, best_run = 0.0;
    std::size_t best_len = 0;
    for (NodeId step = 0; step < n; ++step) {
      double best = kInf;
      NodeId bi = -1;
      int ba = -1;
      for (NodeId i = 0; i < n; ++i) {
        if (moved[i]) continue;
        for (int a = 0; a < n_hat; ++a) {
          if (a == cur[i]) continue;
          const double d = profile_move_delta(stats, model, i, cur[i], a);
          if (d < best) {
            best = d;
            bi = i;
            ba = a;
          }
        }
      }
      if (bi < 0) break;
      apply_stats_move(g, model, stats, bi, cur[bi], ba);
      cur.assign(bi, ba);
      moved[bi] = 1;
      log.emplace_back(bi, ba);
      run += best;
      if (improves(run, best_run)) {
        best_run = run;
        best_len = log.size();
      }
    }
    Partition next = p;
    for (std::size_t j = 0; j < best_len; ++j) next.assign(log[j].first, log[j].second);
    if (!improves(profile_of(g, model, next), start)) break;
    p = std::move(next);
  }
  return p;
}

}  // namespace graphtension
