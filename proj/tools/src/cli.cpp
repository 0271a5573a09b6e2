#include "feedbalance_cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "check.hpp"
#include "feedbalance/baselines.hpp"
#include "feedbalance/dynamics.hpp"
#include "feedbalance/errors.hpp"
#include "feedbalance/generators.hpp"
#include "feedbalance/graph_io.hpp"
#include "feedbalance/harness.hpp"
#include "feedbalance/optimizer.hpp"
#include "feedbalance/partition.hpp"
#include "feedbalance/version.hpp"
#include "json_config.hpp"

namespace feedbalance::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string log_level = "info";
  std::string out = ".";
};

struct NetworkFlags {
  std::string model = "sbm";
  int n = 1000;
  std::vector<int> blocks;
  double intra = 0.02;
  double inter = 0.002;
  double edge_prob = 0.01;
  int attachment = 2;
  bool one_way = false;
};

struct OpinionGenFlags {
  std::string kind = "gaussian";
  double p = 1.0;
  double mean_scale = 0.05;
  double stddev = 0.1;
  double clamp = 1.0;
  std::string labels = "kl";
};

struct InputFlags {
  std::string graph;
  std::string opinions;
  std::string opinions_are = "equilibrium";
  bool undirected = false;
};

struct OptimizerFlags {
  double eta = 0.2;
  double delta_per_edge = 1e-6;
  std::optional<double> delta;
  double budget = 1.0;
  std::string mode = "directed";
  std::string stepper = "adam";
  std::string plain_step = "fixed";
  int max_iters = 500;
  double tol = 1e-10;
  bool jacobi = false;
  double sinkhorn_tol = 1e-8;
  int sinkhorn_sweeps = 1000;
};

struct BaselineFlags {
  std::string kind = "neutral_view";
  double epsilon = 1e-6;
  std::string subscript = "followee";
};

struct SweepFlags {
  std::vector<double> p_grid{1.0};
  std::vector<double> beta_grid;
  std::vector<double> budget_grid{1.0};
  std::vector<std::uint64_t> seeds;
  int repetitions = 1;
  std::vector<std::string> methods{"lcgd", "neutral_view", "oppo_view", "pop"};
  bool no_timing = false;
};

struct PartitionFlags {
  std::string graph;
  int max_passes = 50;
};

/// Thrown while turning flags into configs; reported as a usage error.
class UsageError : public Error {
 public:
  using Error::Error;
};

void AddNetworkFlags(CLI::App* app, NetworkFlags& f) {
  app->add_option("--model", f.model, "Graph model")
      ->check(CLI::IsMember(
          {"sbm", "erdos_renyi", "er", "barabasi_albert", "ba"}))
      ->capture_default_str();
  app->add_option("--blocks", f.blocks, "SBM block sizes, e.g. 500,500")
      ->delimiter(',');
  app->add_option("--intra", f.intra, "SBM intra-block edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--inter", f.inter, "SBM inter-block edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--edge-prob", f.edge_prob, "Erdos-Renyi edge probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--attachment", f.attachment,
                  "Barabasi-Albert edges per new node")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--one-way", f.one_way,
                "Barabasi-Albert: only the new node follows its targets");
}

void AddOpinionGenFlags(CLI::App* app, OpinionGenFlags& f) {
  app->add_option("--opinions", f.kind, "Opinion model")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  app->add_option("--mean-scale", f.mean_scale,
                  "Gaussian: community mean is +-p * mean-scale")
      ->capture_default_str();
  app->add_option("--stddev", f.stddev, "Gaussian standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--clamp", f.clamp, "Gaussian samples clamped to +-clamp")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--labels", f.labels,
                  "Gaussian communities: kl (Kernighan-Lin) or blocks (SBM)")
      ->check(CLI::IsMember({"kl", "blocks"}))
      ->capture_default_str();
}

void AddInputFlags(CLI::App* app, InputFlags& f) {
  app->add_option("--graph", f.graph, "Edge list (src dst [weight])")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--opinions", f.opinions, "Opinion file, one value per node")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--opinions-are", f.opinions_are,
                  "equilibrium: infer innate opinions first; innate: use as is")
      ->check(CLI::IsMember({"equilibrium", "innate"}))
      ->capture_default_str();
  app->add_flag("--undirected", f.undirected,
                "Read each line as an undirected edge");
}

void AddOptimizerFlags(CLI::App* app, OptimizerFlags& f) {
  app->add_option("--eta", f.eta, "Step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--delta-per-edge", f.delta_per_edge,
                  "Stopping tolerance per stored edge")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--delta", f.delta,
                  "Absolute stopping tolerance (overrides --delta-per-edge)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--budget", f.budget, "Mixing weight of the projected step")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--mode", f.mode, "directed or undirected")
      ->check(CLI::IsMember({"directed", "undirected"}))
      ->capture_default_str();
  app->add_option("--stepper", f.stepper, "adam or plain")
      ->check(CLI::IsMember({"adam", "plain"}))
      ->capture_default_str();
  app->add_option("--plain-step", f.plain_step,
                  "Plain stepper step size: fixed or inverse-lipschitz")
      ->check(CLI::IsMember({"fixed", "inverse-lipschitz"}))
      ->capture_default_str();
  app->add_option("--max-iters", f.max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--tol", f.tol, "Relative residual tolerance of each solve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--jacobi", f.jacobi, "Jacobi-precondition the solves");
  app->add_option("--sinkhorn-tol", f.sinkhorn_tol,
                  "Undirected mode: row/column sum tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--sinkhorn-sweeps", f.sinkhorn_sweeps,
                  "Undirected mode: Sinkhorn sweep cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void AddBaselineFlags(CLI::App* app, BaselineFlags& f, bool with_kind) {
  if (with_kind) {
    app->add_option("--kind", f.kind, "neutral_view, oppo_view or pop")
        ->check(CLI::IsMember(
            {"neutral_view", "neutral", "oppo_view", "oppo", "pop"}))
        ->capture_default_str();
  }
  app->add_option("--epsilon", f.epsilon, "Additive guard in baseline weights")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--baseline-subscript", f.subscript,
                  "Whose opinion or degree sets an edge weight")
      ->check(CLI::IsMember({"followee", "follower"}))
      ->capture_default_str();
}

GeneratorConfig ToGenerator(const NetworkFlags& f, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.model = ParseModel(f.model);
  cfg.n = f.n;
  cfg.block_sizes.assign(f.blocks.begin(), f.blocks.end());
  cfg.intra_probability = f.intra;
  cfg.inter_probability = f.inter;
  cfg.edge_probability = f.edge_prob;
  cfg.attachment = f.attachment;
  cfg.symmetric = !f.one_way;
  cfg.seed = seed;
  try {
    Validate(cfg);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

GaussianOpinionParams ToGaussian(const OpinionGenFlags& f) {
  return {f.mean_scale, f.stddev, f.clamp};
}

OptimizerConfig ToOptimizer(const OptimizerFlags& f, int threads) {
  OptimizerConfig cfg;
  cfg.step_size = f.eta;
  cfg.delta_per_edge = f.delta_per_edge;
  cfg.delta = f.delta;
  cfg.budget = f.budget;
  cfg.mode = f.mode == "undirected" ? OptimizationMode::kUndirected
                                    : OptimizationMode::kDirected;
  cfg.stepper = f.stepper == "plain" ? Stepper::kPlain : Stepper::kAdam;
  cfg.plain_rule = f.plain_step == "inverse-lipschitz"
                       ? PlainStepRule::kInverseLipschitz
                       : PlainStepRule::kFixed;
  cfg.max_iterations = f.max_iters;
  cfg.solver.rel_tolerance = f.tol;
  cfg.solver.preconditioner =
      f.jacobi ? Preconditioner::kJacobi : Preconditioner::kNone;
  cfg.sinkhorn.tolerance = f.sinkhorn_tol;
  cfg.sinkhorn.max_sweeps = f.sinkhorn_sweeps;
  cfg.parallel_solves = threads > 1;
  try {
    Validate(cfg);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

BaselineOptions ToBaseline(const BaselineFlags& f) {
  BaselineOptions opts;
  opts.kind = ParseBaselineKind(f.kind);
  opts.epsilon = f.epsilon;
  opts.subject = ParseBaselineSubject(f.subscript);
  return opts;
}

json ObjectiveJson(const ObjectiveValue& v) {
  return {{"total", v.total},
          {"polarization", v.polarization},
          {"disagreement", v.disagreement},
          {"polarization_centered", v.polarization_centered}};
}

json ConfigJson(const CLI::App& app) {
  return json::parse(app.config_to_str(true, false));
}

json VersionJson() {
  return {{"version", kVersion}, {"git_hash", kGitHash}};
}

fs::path OutputDir(const Globals& g) {
  fs::path dir(g.out);
  fs::create_directories(dir);
  return dir;
}

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

struct Inputs {
  Graph graph;
  OpinionVector innate;
};

// Reads the graph and opinions and produces a feasible matrix plus the
// mean-centered innate opinions the optimizer expects.
Inputs LoadInputs(const InputFlags& f, bool doubly_stochastic,
                  const SinkhornOptions& sinkhorn) {
  const Graph raw = LoadEdgeList(f.graph, !f.undirected);
  const OpinionVector values = LoadOpinions(f.opinions);
  if (values.size() != static_cast<std::size_t>(raw.num_nodes())) {
    throw ValidationError(fmt::format(
        "{} holds {} opinions but the graph has {} nodes", f.opinions,
        values.size(), raw.num_nodes()));
  }
  Inputs in;
  if (doubly_stochastic) {
    in.graph = ProjectDoublyStochastic(raw, raw.weights(), sinkhorn).graph;
  } else {
    RowNormalization norm = RowNormalize(raw);
    if (!norm.empty_rows.empty()) {
      spdlog::warn("{} nodes follow nobody; they keep their innate opinion",
                   norm.empty_rows.size());
    }
    in.graph = std::move(norm.graph);
  }
  in.innate = f.opinions_are == "equilibrium"
                  ? MeanCenter(InferInnate(in.graph, values))
                  : MeanCenter(values);
  return in;
}

void WriteTrace(const fs::path& path, const RunTrace& trace, bool finished) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "iteration,f,t1,t2,t3,ms,phase\n";
  for (const TraceRow& r : trace.rows) {
    out << fmt::format("{},{:.17g},{},{},{},{:.3f},iterate\n", r.iteration,
                       r.objective, r.solver_iterations[0],
                       r.solver_iterations[1], r.solver_iterations[2],
                       r.wall_ms);
  }
  if (finished) {
    out << fmt::format("{},{:.17g},,,,,final\n", trace.best_iteration,
                       trace.final_objective);
  }
}

int RunGenerate(const CLI::App& app, const Globals& g, const NetworkFlags& net,
                const OpinionGenFlags& op) {
  const GeneratorConfig cfg = ToGenerator(net, g.seed);
  if (!(op.p > 0.0)) throw UsageError("--p must be positive");
  if (op.labels == "blocks" && cfg.model != GraphModel::kSbm) {
    throw UsageError("--labels blocks needs --model sbm");
  }
  const fs::path dir = OutputDir(g);

  spdlog::info("generating {} graph with n = {}", ModelName(cfg.model), cfg.n);
  const Graph graph = Generate(cfg);
  OpinionVector z;
  std::vector<int> labels;
  if (op.kind == "gaussian") {
    labels = op.labels == "blocks"
                 ? SbmBlockLabels(cfg)
                 : KernighanLinBisect(graph, g.seed + 1).labels;
    z = GenerateGaussianTwoCommunity(labels, op.p, g.seed + 2, ToGaussian(op));
  } else {
    z = GenerateUniform(static_cast<std::size_t>(cfg.n), op.p, g.seed + 2);
  }

  SaveEdgeList(graph, dir / "graph.tsv");
  SaveOpinions(z, dir / "opinions.txt");
  if (!labels.empty()) SaveLabels(labels, dir / "partition.txt");
  json meta = VersionJson();
  meta["config"] = ConfigJson(app);
  meta["n"] = graph.num_nodes();
  meta["m"] = graph.num_edges();
  meta["opinions_are"] = "equilibrium";
  WriteJson(dir / "meta.json", meta);
  spdlog::info("wrote {} edges and {} opinions to {}", graph.num_edges(),
               z.size(), dir.string());
  return kExitOk;
}

int RunRebalance(const CLI::App& app, const Globals& g, const InputFlags& in,
                 const OptimizerFlags& of) {
  const OptimizerConfig cfg = ToOptimizer(of, g.threads);
  const fs::path dir = OutputDir(g);
  const Inputs inputs = LoadInputs(
      in, cfg.mode == OptimizationMode::kUndirected, cfg.sinkhorn);
  spdlog::info("rebalancing n = {}, m = {} ({} mode, {} stepper)",
               inputs.graph.num_nodes(), inputs.graph.num_edges(), of.mode,
               of.stepper);

  const ObjectiveValue before = Objective(inputs.graph, inputs.innate,
                                          cfg.solver);
  const auto start = std::chrono::steady_clock::now();
  LcgdResult result;
  try {
    result = Lcgd(inputs.graph, inputs.innate, cfg);
  } catch (const OptimizationError& e) {
    WriteTrace(dir / "trace.csv", e.trace(), false);
    throw;
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  const ObjectiveValue after = Objective(result.graph, inputs.innate,
                                         cfg.solver);
  const double innate_f = InnateObjective(inputs.graph, inputs.innate);

  SaveEdgeList(result.graph, dir / "graph_star.tsv");
  WriteTrace(dir / "trace.csv", result.trace, true);
  json report = VersionJson();
  report["rho_eq"] = before.total == 0.0 ? json(nullptr)
                                         : json(1.0 - after.total / before.total);
  report["rho_0"] =
      innate_f == 0.0 ? json(nullptr) : json(1.0 - after.total / innate_f);
  report["f_before"] = ObjectiveJson(before);
  report["f_after"] = ObjectiveJson(after);
  report["iterations"] = result.trace.rows.size();
  report["stop_reason"] = StopReasonName(result.trace.reason);
  report["best_iteration"] = result.trace.best_iteration;
  report["delta"] = result.trace.delta;
  report["wall_time_s"] = seconds;
  report["config"] = ConfigJson(app);
  WriteJson(dir / "report.json", report);
  spdlog::info("f {:.6g} -> {:.6g} in {} iterations ({}), rho_eq = {:.4f}",
               before.total, after.total, result.trace.rows.size(),
               StopReasonName(result.trace.reason),
               before.total == 0.0 ? 0.0 : 1.0 - after.total / before.total);
  return kExitOk;
}

int RunBaseline(const CLI::App& app, const Globals& g, const InputFlags& in,
                const BaselineFlags& bf) {
  const BaselineOptions opts = ToBaseline(bf);
  const fs::path dir = OutputDir(g);
  const Inputs inputs = LoadInputs(in, false, {});
  const Graph out = ApplyBaseline(inputs.graph, inputs.innate, opts);
  const ObjectiveValue before = Objective(inputs.graph, inputs.innate);
  const ObjectiveValue after = Objective(out, inputs.innate);
  const double innate_f = InnateObjective(inputs.graph, inputs.innate);

  SaveEdgeList(out, dir / "graph_baseline.tsv");
  json report = VersionJson();
  report["method"] = BaselineName(opts.kind);
  report["rho_eq"] = before.total == 0.0 ? json(nullptr)
                                         : json(1.0 - after.total / before.total);
  report["rho_0"] =
      innate_f == 0.0 ? json(nullptr) : json(1.0 - after.total / innate_f);
  report["f_before"] = ObjectiveJson(before);
  report["f_after"] = ObjectiveJson(after);
  report["config"] = ConfigJson(app);
  WriteJson(dir / "report.json", report);
  spdlog::info("{}: f {:.6g} -> {:.6g}", BaselineName(opts.kind),
               before.total, after.total);
  return kExitOk;
}

int RunSweepCommand(const Globals& g, const NetworkFlags& net,
                    const OpinionGenFlags& op, const OptimizerFlags& of,
                    const BaselineFlags& bf, const SweepFlags& sf) {
  SweepSpec spec;
  spec.network = ToGenerator(net, g.seed);
  spec.opinions.source = op.kind == "gaussian"
                             ? OpinionSource::kGaussianTwoCommunity
                             : OpinionSource::kUniform;
  spec.opinions.gaussian = ToGaussian(op);
  if (op.labels == "blocks") {
    if (spec.network.model != GraphModel::kSbm) {
      throw UsageError("--labels blocks needs --model sbm");
    }
    spec.opinions.labels = SbmBlockLabels(spec.network);
  }
  spec.polarization_grid = sf.p_grid;
  spec.beta_sbm_grid = sf.beta_grid;
  spec.budget_grid = sf.budget_grid;
  if (!sf.seeds.empty()) {
    spec.seeds = sf.seeds;
  } else {
    spec.seeds.clear();
    for (int r = 0; r < sf.repetitions; ++r) {
      spec.seeds.push_back(g.seed + static_cast<std::uint64_t>(r));
    }
  }
  spec.methods = sf.methods;
  spec.optimizer = ToOptimizer(of, 1);
  spec.baseline = ToBaseline(bf);
  spec.threads = g.threads;
  spec.record_timing = !sf.no_timing;
  try {
    Validate(spec);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  const fs::path dir = OutputDir(g);
  const std::vector<SweepRow> rows = RunSweep(spec);
  std::ofstream out(dir / "sweep.csv");
  if (!out) throw Error("cannot write " + (dir / "sweep.csv").string());
  WriteSweepCsv(out, rows);
  std::size_t failed = 0;
  for (const SweepRow& r : rows) failed += !r.error.empty();
  spdlog::info("wrote {} rows to {} ({} with errors)", rows.size(),
               (dir / "sweep.csv").string(), failed);
  return kExitOk;
}

int RunCheck() {
  // Some items feed deliberately uncentered opinions to the solvers.
  const auto level = spdlog::get_level();
  spdlog::set_level(std::max(level, spdlog::level::err));
  const std::vector<CheckItem> items = RunCheckBattery();
  spdlog::set_level(level);
  std::size_t failed = 0;
  for (const CheckItem& item : items) {
    std::cout << (item.passed ? "PASS  " : "FAIL  ") << item.name << "  ["
              << item.detail << "]\n";
    failed += !item.passed;
  }
  std::cout << items.size() - failed << "/" << items.size() << " checks passed\n";
  if (failed == 0) return kExitOk;
  std::cout << "failed:\n";
  for (const CheckItem& item : items) {
    if (!item.passed) std::cout << "  " << item.name << '\n';
  }
  return kExitFailure;
}

int RunPartition(const Globals& g, const PartitionFlags& pf) {
  const Graph graph = LoadEdgeList(pf.graph, true);
  const BisectionResult r = KernighanLinBisect(graph, g.seed, pf.max_passes);
  const fs::path dir = OutputDir(g);
  SaveLabels(r.labels, dir / "partition.txt");
  spdlog::info("cut weight {:.6g} after {} passes", r.cut_weight, r.passes);
  return kExitOk;
}

void ConfigureLogging(const std::string& flag_level) {
  std::string level = flag_level;
  if (const char* env = std::getenv("FEEDBALANCE_LOG"); env && *env) {
    level = env;
  }
  const auto parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") {
    spdlog::set_level(spdlog::level::info);
    spdlog::warn("unknown log level '{}', using info", level);
    return;
  }
  spdlog::set_level(parsed);
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Re-weight follow graphs to reduce polarization and "
               "disagreement at Friedkin-Johnsen equilibrium.",
               "feedbalance"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  // Global options may follow the subcommand name.
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every random choice")
      ->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--log-level", globals.log_level,
                 "trace, debug, info, warn, error or off "
                 "(FEEDBALANCE_LOG overrides)")
      ->check(CLI::IsMember(
          {"trace", "debug", "info", "warn", "error", "critical", "off"}))
      ->capture_default_str();
  app.add_option("--out", globals.out, "Output directory")
      ->capture_default_str();

  NetworkFlags net;
  OpinionGenFlags opinion_gen;
  InputFlags inputs;
  OptimizerFlags optimizer;
  BaselineFlags baseline;
  SweepFlags sweep;
  PartitionFlags partition;

  CLI::App* generate = app.add_subcommand(
      "generate", "Sample a synthetic graph and equilibrium opinions");
  generate->add_option("--n", net.n, "Number of nodes")
      ->required()
      ->check(CLI::Range(2, std::numeric_limits<int>::max()));
  generate->add_option("--p", opinion_gen.p, "Polarization parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  AddNetworkFlags(generate, net);
  AddOpinionGenFlags(generate, opinion_gen);

  CLI::App* rebalance =
      app.add_subcommand("rebalance", "Run LcGD on a graph and opinions");
  AddInputFlags(rebalance, inputs);
  AddOptimizerFlags(rebalance, optimizer);

  CLI::App* base =
      app.add_subcommand("baseline", "Apply a heuristic re-weighting");
  AddInputFlags(base, inputs);
  AddBaselineFlags(base, baseline, true);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Cross-product experiment over synthetic networks");
  sweep_cmd->add_option("--n", net.n, "Number of nodes")
      ->check(CLI::Range(2, std::numeric_limits<int>::max()))
      ->capture_default_str();
  AddNetworkFlags(sweep_cmd, net);
  AddOpinionGenFlags(sweep_cmd, opinion_gen);
  AddOptimizerFlags(sweep_cmd, optimizer);
  AddBaselineFlags(sweep_cmd, baseline, false);
  sweep_cmd->add_option("--p-grid", sweep.p_grid, "Polarization values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--beta-grid", sweep.beta_grid,
                        "SBM inter-block probabilities")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--budget-grid", sweep.budget_grid, "Budget values")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  auto* seeds_opt = sweep_cmd->add_option("--seeds", sweep.seeds,
                                          "Explicit seed list")
                        ->delimiter(',');
  sweep_cmd
      ->add_option("--repetitions", sweep.repetitions,
                   "Seeds seed, seed+1, ... when --seeds is absent")
      ->check(CLI::PositiveNumber)
      ->excludes(seeds_opt)
      ->capture_default_str();
  sweep_cmd->add_option("--methods", sweep.methods,
                        "lcgd, lcgd_plain, neutral_view, oppo_view, pop")
      ->delimiter(',')
      ->check(CLI::IsMember({"lcgd", "lcgd_adam", "lcgd_plain", "neutral_view",
                             "neutral", "oppo_view", "oppo", "pop"}));
  sweep_cmd->add_flag("--no-timing", sweep.no_timing,
                      "Write time_s = 0 so output is byte-reproducible");

  app.add_subcommand("check", "Run the built-in verification battery");

  CLI::App* part = app.add_subcommand(
      "partition", "Kernighan-Lin bisection of a graph (undirected view)");
  part->add_option("--graph", partition.graph, "Edge list")
      ->required()
      ->check(CLI::ExistingFile);
  part->add_option("--max-passes", partition.max_passes, "Pass cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  ConfigureLogging(globals.log_level);

  try {
    if (*generate) return RunGenerate(app, globals, net, opinion_gen);
    if (*rebalance) return RunRebalance(app, globals, inputs, optimizer);
    if (*base) return RunBaseline(app, globals, inputs, baseline);
    if (*sweep_cmd) {
      return RunSweepCommand(globals, net, opinion_gen, optimizer, baseline,
                             sweep);
    }
    if (*part) return RunPartition(globals, partition);
    return RunCheck();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace feedbalance::cli
