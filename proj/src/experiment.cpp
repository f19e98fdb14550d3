#include "graphtension/experiment.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "graphtension/error.hpp"
#include "graphtension/eval.hpp"

namespace graphtension {

DetectMode parse_detect_mode(const std::string& s) {
  if (s == "split-merge" || s == "split_merge") return DetectMode::split_merge;
  if (s == "fixed") return DetectMode::fixed;
  throw ConfigError("unknown detection mode '" + s + "' (expected split-merge or fixed)");
}

std::string to_string(DetectMode m) { return m == DetectMode::fixed ? "fixed" : "split-merge"; }

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  const PipelineConfig& p = cfg.pipeline;
  nlohmann::json j;
  j["mode"] = to_string(cfg.mode);
  if (cfg.mode == DetectMode::fixed) j["n_hat"] = cfg.n_hat;
  j["n_hat_expected"] = p.n_hat_expected;
  j["penalty_coeff"] = p.penalty_coeff;
  j["inf_reset_factor"] = p.inf_reset_factor;
  j["em_max_rounds"] = p.em_max_rounds;
  j["em_rerandomize"] = p.em_rerandomize;
  j["polish"] = p.polish;
  switch (p.solver) {
    case SolverKind::mcf:
      j["max_iters"] = p.settings.mcf.max_iters;
      j["serial_mode"] = p.settings.mcf.serial_mode;
      break;
    case SolverKind::ac:
      j["epsilon"] = p.settings.ac.epsilon;
      j["dt"] = p.settings.ac.dt;
      j["c"] = p.settings.ac.c;
      j["max_iters"] = p.settings.ac.max_iters;
      j["stop_tol"] = p.settings.ac.stop_tol;
      j["m_eig"] = p.settings.ac.m_eig;
      j["metric"] = to_string(p.settings.ac.metric);
      break;
    case SolverKind::mbo:
      j["outer_steps"] = p.settings.mbo.outer_steps;
      j["tau"] = p.settings.mbo.tau;
      j["dt_inner"] = p.settings.mbo.dt_inner;
      j["threshold_rule"] = to_string(p.settings.mbo.threshold_rule);
      j["m_eig"] = p.settings.mbo.m_eig;
      j["metric"] = to_string(p.settings.mbo.metric);
      break;
  }
  return j;
}

RunResult evaluate_partition(const Graph& g, const Partition& p, const Partition* reference) {
  if (p.size() != static_cast<std::size_t>(g.n_nodes())) throw InputError("partition does not cover the graph");
  const DegreeModel model = DegreeModel::of(g);
  RunResult r;
  const Partition q = p.compacted();
  const PartitionStats stats = partition_stats(g, q, model);
  r.energy = profile_energy(stats, model.two_m);
  r.w_matrix = optimal_w(stats, model.two_m);
  r.n_communities = q.n_hat();
  if (reference) {
    if (reference->size() != p.size()) throw InputError("reference partition does not cover the graph");
    const double e_ref = profile_energy(partition_stats(g, *reference, model), model.two_m);
    r.reference_energy = e_ref;
    if (e_ref == 0.0) r.score_undefined = true;
    else r.score = score(r.energy, e_ref);
    r.nmi = nmi(q, *reference);
  }
  return r;
}

ExperimentOutput run_experiment(const Graph& g, const Partition* reference, const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const DetectResult d = cfg.mode == DetectMode::fixed ? detect_fixed(g, cfg.n_hat, cfg.pipeline)
                                                       : detect(g, cfg.pipeline);
  ExperimentOutput out;
  out.partition = d.partition;
  out.result = evaluate_partition(g, d.partition, reference);
  out.result.seed = cfg.pipeline.seed;
  out.result.solver = to_string(cfg.pipeline.solver);
  out.result.params = config_to_json(cfg);
  out.result.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<ExperimentOutput> run_batch(const Graph& g, const Partition* reference, const ExperimentConfig& cfg,
                                        int trials, int workers) {
  if (trials < 1) throw ConfigError("batch: trials must be >= 1");
  std::vector<ExperimentOutput> out(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        ExperimentConfig c = cfg;
        c.pipeline.seed = derive_seed(cfg.pipeline.seed, static_cast<std::uint64_t>(t));
        out[t] = run_experiment(g, reference, c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_workers = std::max(1, std::min(workers, trials));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace graphtension
