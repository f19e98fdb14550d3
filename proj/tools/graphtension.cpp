#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "graphtension/error.hpp"
#include "graphtension/eval.hpp"
#include "graphtension/experiment.hpp"
#include "graphtension/generators.hpp"

namespace gt = graphtension;

namespace {

class IoError : public gt::Error {
 public:
  using gt::Error::Error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

gt::Graph read_graph(const std::string& path) {
  auto in = open_in(path);
  return gt::load_edge_list(in);
}

gt::Partition read_partition(const std::string& path, gt::NodeId n) {
  auto in = open_in(path);
  return gt::load_partition(in, n);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

int worker_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GRAPHTENSION_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      throw gt::ConfigError("GRAPHTENSION_THREADS must be a positive integer");
    }
  }
  return n;
}

struct DetectOptions {
  std::string graph, reference, out_partition, out_json;
  std::string solver = "mcf", mode = "split-merge", threshold_rule = "sigma-weighted", metric = "degree";
  std::uint64_t seed = 0;
  gt::ExperimentConfig cfg;
};

void add_detect_options(CLI::App* cmd, DetectOptions& o) {
  auto& p = o.cfg.pipeline;
  cmd->add_option("--graph", o.graph, "Edge list (one 'i j' pair per line, 0-based)")->required();
  cmd->add_option("--reference", o.reference, "Reference partition ('node community' per line)");
  cmd->add_option("--solver", o.solver, "mcf, ac or mbo")->capture_default_str();
  cmd->add_option("--mode", o.mode, "split-merge or fixed")->capture_default_str();
  cmd->add_option("--nhat", p.n_hat_expected, "Expected community count (exact count in fixed mode)")
      ->capture_default_str();
  cmd->add_option("--penalty", p.penalty_coeff, "Community-count penalty coefficient")->capture_default_str();
  cmd->add_option("--inf-reset", p.inf_reset_factor, "Reset factor for infinite W entries")->capture_default_str();
  cmd->add_option("--em-rounds", p.em_max_rounds, "Maximum EM rounds")->capture_default_str();
  cmd->add_flag("--em-rerandomize", p.em_rerandomize, "Random restart for every EM partition step");
  cmd->add_flag("!--no-polish", p.polish, "Skip the whole-graph EM pass after split-merge");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--max-iters", p.settings.mcf.max_iters, "MCF iteration cap")->capture_default_str();
  cmd->add_flag("--serial", p.settings.mcf.serial_mode, "Serial MCF updates");
  cmd->add_option("--epsilon", p.settings.ac.epsilon, "AC interface scale")->capture_default_str();
  cmd->add_option("--dt", p.settings.ac.dt, "AC time step (0: automatic)")->capture_default_str();
  cmd->add_option("--c", p.settings.ac.c, "AC splitting constant (0: 2.01/epsilon)")->capture_default_str();
  cmd->add_option("--ac-iters", p.settings.ac.max_iters, "AC iteration cap")->capture_default_str();
  cmd->add_option("--stop-tol", p.settings.ac.stop_tol, "AC stopping tolerance")->capture_default_str();
  cmd->add_option("--meig", p.settings.ac.m_eig, "Retained Laplacian eigenpairs (0: 2 n_hat)")
      ->capture_default_str();
  cmd->add_option("--metric", o.metric, "AC/MBO diffusion metric: degree or identity")->capture_default_str();
  cmd->add_option("--tau", p.settings.mbo.tau, "MBO diffusion time (0: automatic)")->capture_default_str();
  cmd->add_option("--dt-inner", p.settings.mbo.dt_inner, "MBO inner step (0: automatic)")->capture_default_str();
  cmd->add_option("--threshold-rule", o.threshold_rule, "sigma-weighted or argmax")->capture_default_str();
  cmd->add_option("--outer-steps", p.settings.mbo.outer_steps, "MBO outer steps")->capture_default_str();
}

void finish_detect_options(DetectOptions& o) {
  auto& p = o.cfg.pipeline;
  p.solver = gt::parse_solver(o.solver);
  p.seed = o.seed;
  p.settings.mbo.threshold_rule = gt::parse_threshold_rule(o.threshold_rule);
  p.settings.mbo.m_eig = p.settings.ac.m_eig;
  p.settings.ac.metric = p.settings.mbo.metric = gt::parse_metric(o.metric);
  o.cfg.mode = gt::parse_detect_mode(o.mode);
  o.cfg.n_hat = p.n_hat_expected;
}

void write_partition_file(const std::string& path, const gt::Partition& p) {
  if (path.empty()) return;
  auto out = open_out(path);
  gt::write_partition(out, p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection by surface-tension energy minimization"};
  app.require_subcommand(1);

  // generate
  std::string model = "pp", out_graph, out_reference;
  std::uint64_t gen_seed = 0;
  gt::PpConfig pp;
  gt::LfrConfig lfr;
  int ms_components = 10;
  auto* gen = app.add_subcommand("generate", "Generate a benchmark graph with planted communities");
  gen->add_option("--model", model, "pp, lfr or ms")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out-graph", out_graph, "Edge list output")->required();
  gen->add_option("--out-reference", out_reference, "Reference partition output");
  gen->add_option("--nodes", pp.n_nodes, "pp/lfr: node count (lfr default 1000)");
  gen->add_option("--communities", pp.n_hat, "pp: community count")->capture_default_str();
  gen->add_option("--degree-exponent", pp.degree_exponent, "pp/lfr: degree power-law exponent")
      ->capture_default_str();
  gen->add_option("--k-min", pp.k_min, "pp: minimum expected degree")->capture_default_str();
  gen->add_option("--k-max", pp.k_max, "pp: maximum expected degree (0: min(300, sqrt(N <k>)))")->capture_default_str();
  gen->add_option("--omega-in", pp.omega_in, "pp: within-community affinity")->capture_default_str();
  gen->add_option("--omega-out", pp.omega_out, "pp: between-community affinity")->capture_default_str();
  gen->add_flag("!--no-normalize", pp.normalize, "pp: use omega_in/omega_out as given");
  gen->add_option("--lambda", pp.lambda, "pp: interpolation between planted (1) and null (0) models");
  gen->add_option("--mean-k", lfr.mean_k, "lfr: mean degree")->capture_default_str();
  gen->add_option("--max-k", lfr.max_k, "lfr: maximum degree")->capture_default_str();
  gen->add_option("--size-exponent", lfr.size_exponent, "lfr: community size exponent")->capture_default_str();
  gen->add_option("--size-min", lfr.size_min, "lfr: minimum community size")->capture_default_str();
  gen->add_option("--size-max", lfr.size_max, "lfr: maximum community size")->capture_default_str();
  gen->add_option("--mu", lfr.mu, "lfr: mixing parameter")->capture_default_str();
  gen->add_option("--components", ms_components, "ms: component count")->capture_default_str();

  // detect
  DetectOptions det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect communities in an edge list");
  add_detect_options(detect_cmd, det);
  detect_cmd->add_option("--out-partition", det.out_partition, "Partition output");
  detect_cmd->add_option("--out-json", det.out_json, "Result JSON output (default stdout)");

  // eval
  std::string ev_graph, ev_partition, ev_reference, ev_json;
  auto* eval_cmd = app.add_subcommand("eval", "Score a partition against a reference");
  eval_cmd->add_option("--graph", ev_graph, "Edge list")->required();
  eval_cmd->add_option("--partition", ev_partition, "Partition to evaluate")->required();
  eval_cmd->add_option("--reference", ev_reference, "Reference partition");
  eval_cmd->add_option("--out-json", ev_json, "Result JSON output (default stdout)");

  // knn
  std::string features, knn_out;
  int knn_k = 10, height = 0, width = 0, radius = 1;
  auto* knn_cmd = app.add_subcommand("knn", "Build a k-nearest-neighbor graph from feature vectors");
  knn_cmd->add_option("--features", features, "Feature CSV, one item per row")->required();
  knn_cmd->add_option("--k", knn_k, "Neighbors per item")->capture_default_str();
  knn_cmd->add_option("--image-height", height, "Treat rows as pixels of an image of this height");
  knn_cmd->add_option("--image-width", width, "Image width");
  knn_cmd->add_option("--radius", radius, "Nonlocal window radius for image input")->capture_default_str();
  knn_cmd->add_option("--out-graph", knn_out, "Edge list output")->required();

  // batch
  DetectOptions bat;
  int trials = 3;
  std::string out_dir;
  auto* batch_cmd = app.add_subcommand("batch", "Run several seeded trials of detect");
  add_detect_options(batch_cmd, bat);
  batch_cmd->add_option("--trials", trials, "Trial count")->capture_default_str();
  batch_cmd->add_option("--out-dir", out_dir, "Directory for per-trial partitions and JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      gt::PlantedGraph pg;
      if (model == "pp") {
        pp.seed = gen_seed;
        pg = gt::gen_pp(pp);
      } else if (model == "lfr") {
        lfr.seed = gen_seed;
        lfr.n_nodes = gen->count("--nodes") ? pp.n_nodes : 1000;
        lfr.degree_exponent = pp.degree_exponent;
        pg = gt::gen_lfr_style(lfr);
      } else if (model == "ms") {
        pg = gt::gen_multiscale(ms_components, gen_seed);
      } else {
        throw gt::ConfigError("unknown model '" + model + "' (expected pp, lfr or ms)");
      }
      auto g_out = open_out(out_graph);
      gt::write_edge_list(g_out, pg.graph);
      write_partition_file(out_reference, pg.reference);
      std::cerr << "generated " << pg.graph.n_nodes() << " nodes, " << pg.graph.n_edges() << " edges, "
                << pg.reference.n_hat() << " communities\n";
    } else if (*detect_cmd) {
      finish_detect_options(det);
      const gt::Graph g = read_graph(det.graph);
      std::optional<gt::Partition> ref;
      if (!det.reference.empty()) ref = read_partition(det.reference, g.n_nodes());
      const auto out = gt::run_experiment(g, ref ? &*ref : nullptr, det.cfg);
      write_partition_file(det.out_partition, out.partition);
      write_json(det.out_json, gt::to_json(out.result));
    } else if (*eval_cmd) {
      const gt::Graph g = read_graph(ev_graph);
      const gt::Partition p = read_partition(ev_partition, g.n_nodes());
      std::optional<gt::Partition> ref;
      if (!ev_reference.empty()) ref = read_partition(ev_reference, g.n_nodes());
      gt::RunResult r = gt::evaluate_partition(g, p, ref ? &*ref : nullptr);
      r.solver = "none";
      write_json(ev_json, gt::to_json(r));
    } else if (*knn_cmd) {
      auto in = open_in(features);
      gt::FeatureMatrix f = gt::load_features(in);
      if (height > 0 || width > 0) f = gt::nonlocal_features(gt::image_from_rows(f, height, width), radius);
      const gt::Graph g = gt::knn_graph(f, knn_k);
      auto out = open_out(knn_out);
      gt::write_edge_list(out, g);
    } else if (*batch_cmd) {
      finish_detect_options(bat);
      const gt::Graph g = read_graph(bat.graph);
      std::optional<gt::Partition> ref;
      if (!bat.reference.empty()) ref = read_partition(bat.reference, g.n_nodes());
      std::filesystem::create_directories(out_dir);
      const auto outs = gt::run_batch(g, ref ? &*ref : nullptr, bat.cfg, trials, worker_count());
      nlohmann::json summary = nlohmann::json::array();
      for (std::size_t t = 0; t < outs.size(); ++t) {
        const std::string stem = (std::filesystem::path(out_dir) / ("trial_" + std::to_string(t))).string();
        write_partition_file(stem + ".partition", outs[t].partition);
        const nlohmann::json j = gt::to_json(outs[t].result);
        write_json(stem + ".json", j);
        summary.push_back(j);
      }
      write_json((std::filesystem::path(out_dir) / "summary.json").string(), summary);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gt::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gt::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gt::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
