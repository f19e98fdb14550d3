#include "graphtension/mcf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphtension/error.hpp"
#include "move_evaluator.hpp"

namespace graphtension {

namespace {

using detail::MoveEvaluator;

int pick_label(const Eigen::VectorXd& delta, int current, Rng& rng, std::vector<int>& ties) {
  const double best = delta.minCoeff();
  if (best == -kInf || best == kInf) {
    ties.clear();
    for (int a = 0; a < delta.size(); ++a)
      if (delta[a] == best) ties.push_back(a);
  } else {
    const double tol = 1e-12 * (1.0 + delta.cwiseAbs().maxCoeff());
    ties.clear();
    for (int a = 0; a < delta.size(); ++a)
      if (delta[a] <= best + tol) ties.push_back(a);
  }
  if (std::find(ties.begin(), ties.end(), current) != ties.end()) return current;
  if (ties.size() == 1) return ties.front();
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

}  // namespace

Partition mcf_step(const Graph& g, const DegreeModel& model, const Partition& p,
                   const AffinityMatrix& w, McfMode mode, Rng& rng) {
  if (p.size() != static_cast<std::size_t>(g.n_nodes()))
    throw ContractViolation("mcf_step: partition size mismatch");
  if (w.size() != p.n_hat()) throw ContractViolation("mcf_step: affinity size mismatch");
  MoveEvaluator eval(g, model, p, w);
  Eigen::VectorXd delta;
  std::vector<int> ties;
  Partition next = p;

  if (mode == McfMode::simultaneous) {
    for (NodeId i = 0; i < g.n_nodes(); ++i) {
      eval.deltas(p, i, delta);
      next.assign(i, pick_label(delta, p[i], rng, ties));
    }
    return next;
  }

  std::vector<NodeId> order(static_cast<std::size_t>(g.n_nodes()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (NodeId i : order) {
    eval.deltas(next, i, delta);
    const int from = next[i];
    const int to = pick_label(delta, from, rng, ties);
    if (to != from) {
      eval.apply_move(i, from, to);
      next.assign(i, to);
    }
  }
  return next;
}

SolveResult mcf_run(const Graph& g, const DegreeModel& model, const AffinityMatrix& w, int n_hat,
                    const McfConfig& cfg, const Partition* initial) {
  if (n_hat < 1) throw ContractViolation("mcf_run: n_hat must be >= 1");
  if (cfg.max_iters < 1) throw ConfigError("mcf: max_iters must be >= 1");
  if (w.size() != n_hat) throw ContractViolation("mcf_run: affinity size mismatch");
  Rng rng(cfg.seed);
  SolveResult out;
  if (n_hat == 1) {
    out.partition = Partition::single(g.n_nodes());
    out.energy = energy(g, model, out.partition, w);
    out.trace = {out.energy};
    out.converged = true;
    return out;
  }

  Partition current = initial ? *initial : Partition::uniform_random(g.n_nodes(), n_hat, rng);
  if (current.n_hat() != n_hat || current.size() != static_cast<std::size_t>(g.n_nodes()))
    throw ContractViolation("mcf_run: initial partition does not match");
  const McfMode mode = cfg.serial_mode ? McfMode::serial : McfMode::simultaneous;
  out.trace.push_back(energy(g, model, current, w));
  Partition previous = current;
  for (int it = 0; it < cfg.max_iters; ++it) {
    Partition next = mcf_step(g, model, current, w, mode, rng);
    if (mode == McfMode::simultaneous && it > 0 && next == previous && next != current)
      next = mcf_step(g, model, current, w, McfMode::serial, rng);
    ++out.iterations;
    const bool unchanged = next == current;
    previous = std::move(current);
    current = std::move(next);
    out.trace.push_back(energy(g, model, current, w));
    if (unchanged) {
      out.converged = true;
      break;
    }
  }
  out.energy = out.trace.back();
  out.partition = std::move(current);
  return out;
}

}  // namespace graphtension
