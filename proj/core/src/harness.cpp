#include "feedbalance/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "feedbalance/errors.hpp"
#include "feedbalance/partition.hpp"
#include "feedbalance/reference.hpp"

namespace feedbalance {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent streams for the graph, the partition and the opinions.
constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kPartitionStream = 1;
constexpr std::uint64_t kOpinionStream = 2;

std::uint64_t SubSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix(seed * 0x100000001b3ULL + stream);
}

double Ratio(double numerator, double denominator, const char* what) {
  if (denominator == 0.0 || !std::isfinite(denominator)) {
    throw UndefinedMeasureError(std::string(what) +
                                " is undefined: zero denominator");
  }
  return 1.0 - numerator / denominator;
}

std::string Fingerprint(const Method& m) {
  if (m.kind == MethodKind::kBaseline) {
    return fmt::format("{};eps={:g};subject={}", m.name, m.baseline.epsilon,
                       m.baseline.subject == BaselineSubject::kFollowee
                           ? "followee"
                           : "follower");
  }
  const OptimizerConfig& c = m.optimizer;
  return fmt::format(
      "{};eta={:g};delta_per_edge={:g};budget={:g};max_iters={};stepper={};"
      "mode={};tol={:g}",
      m.name, c.step_size, c.delta ? *c.delta : c.delta_per_edge, c.budget,
      c.max_iterations, c.stepper == Stepper::kAdam ? "adam" : "plain",
      c.mode == OptimizationMode::kDirected ? "directed" : "undirected",
      c.solver.rel_tolerance);
}

void VerifyFeasible(const Graph& input, const Graph& output, bool doubly) {
  if (!output.SamePattern(input)) {
    bool subset = output.num_nodes() == input.num_nodes();
    for (NodeId i = 0; subset && i < output.num_nodes(); ++i) {
      const auto w = output.RowWeights(i);
      const auto cols = output.Neighbors(i);
      for (std::size_t k = 0; k < cols.size() && subset; ++k) {
        subset = w[k] == 0.0 || input.FindEdge(i, cols[k]).has_value();
      }
    }
    if (!subset) throw Error("method output adds edges outside the input");
  }
  const double row_dev = MaxRowSumDeviation(output);
  if (row_dev > 1e-10 && !(doubly && row_dev <= 1e-7)) {
    throw Error(fmt::format("method output rows deviate from 1 by {:.3g}",
                            row_dev));
  }
}

}  // namespace

double InnateObjective(const Graph& g, const OpinionVector& s) {
  double ss = 0.0;
  for (const double v : s.values) ss += v * v;
  return ss + Disagreement(g, s.values);
}

double RhoEq(const Graph& g, const Graph& g_star, const OpinionVector& s,
             const SolverConfig& cfg) {
  const double before = Objective(g, s, cfg).total;
  const double after = Objective(g_star, s, cfg).total;
  return Ratio(after, before, "rho_eq");
}

double RhoZero(const Graph& g, const Graph& g_star, const OpinionVector& s,
               const SolverConfig& cfg) {
  return Ratio(Objective(g_star, s, cfg).total, InnateObjective(g, s),
               "rho_0");
}

Method MakeMethod(const std::string& name, const OptimizerConfig& optimizer,
                  const BaselineOptions& baseline) {
  Method m;
  m.name = name;
  m.optimizer = optimizer;
  m.baseline = baseline;
  if (name == "lcgd" || name == "lcgd_adam") {
    m.kind = MethodKind::kLcgd;
    m.optimizer.stepper = Stepper::kAdam;
  } else if (name == "lcgd_plain") {
    m.kind = MethodKind::kLcgd;
    m.optimizer.stepper = Stepper::kPlain;
  } else {
    m.kind = MethodKind::kBaseline;
    m.baseline.kind = ParseBaselineKind(name);
    m.name = BaselineName(m.baseline.kind);
  }
  return m;
}

OpinionVector PrepareInnateOpinions(const Graph& g, const OpinionSpec& spec,
                                    std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  OpinionVector z;
  switch (spec.source) {
    case OpinionSource::kGaussianTwoCommunity: {
      std::vector<int> labels;
      if (spec.labels) {
        labels = *spec.labels;
      } else {
        labels = KernighanLinBisect(g, SubSeed(seed, kPartitionStream)).labels;
      }
      z = GenerateGaussianTwoCommunity(labels, spec.polarization,
                                       SubSeed(seed, kOpinionStream),
                                       spec.gaussian);
      break;
    }
    case OpinionSource::kUniform:
      z = GenerateUniform(n, spec.polarization, SubSeed(seed, kOpinionStream));
      break;
    case OpinionSource::kGiven:
      if (!spec.values) throw ValidationError("no opinion values given");
      z = *spec.values;
      if (!spec.given_are_equilibrium) {
        if (z.size() != n) {
          throw ValidationError("opinion vector does not match the graph size");
        }
        return MeanCenter(z);
      }
      break;
  }
  return MeanCenter(InferInnate(g, z));
}

Experiment RunExperiment(const ExperimentSpec& spec) {
  Experiment ex;
  if (spec.graph) {
    ex.graph = RowNormalize(*spec.graph).graph;
  } else {
    GeneratorConfig gen = spec.generator;
    gen.seed = SubSeed(spec.seed, kGraphStream);
    ex.graph = Generate(gen);
  }
  ex.innate = PrepareInnateOpinions(ex.graph, spec.opinions, spec.seed);

  const ObjectiveValue before = Objective(ex.graph, ex.innate, spec.solver);
  const double innate_f = InnateObjective(ex.graph, ex.innate);

  for (const Method& method : spec.methods) {
    EvalReport report;
    report.method = method.name;
    report.f_before = before;
    report.seed = spec.seed;
    report.fingerprint = Fingerprint(method);
    Graph out = ex.graph;
    RunTrace trace;
    try {
      const auto start = Clock::now();
      if (method.kind == MethodKind::kLcgd) {
        OptimizerConfig cfg = method.optimizer;
        LcgdResult r = Lcgd(ex.graph, ex.innate, cfg);
        out = std::move(r.graph);
        trace = std::move(r.trace);
        report.iterations = static_cast<int>(trace.rows.size());
      } else {
        out = ApplyBaseline(ex.graph, ex.innate, method.baseline);
      }
      if (spec.record_timing) {
        report.wall_time_s =
            std::chrono::duration<double>(Clock::now() - start).count();
      }
      VerifyFeasible(ex.graph, out,
                     method.kind == MethodKind::kLcgd &&
                         method.optimizer.mode == OptimizationMode::kUndirected);
      report.f_after = Objective(out, ex.innate, spec.solver);
      report.rho_eq = Ratio(report.f_after.total, before.total, "rho_eq");
      report.rho_0 = Ratio(report.f_after.total, innate_f, "rho_0");
    } catch (const OptimizationError& e) {
      report.error = e.what();
      trace = e.trace();
      spdlog::error("{}: {}", method.name, e.what());
    } catch (const Error& e) {
      report.error = e.what();
      spdlog::error("{}: {}", method.name, e.what());
    }
    ex.reports.push_back(std::move(report));
    ex.outputs.push_back(std::move(out));
    ex.traces.push_back(std::move(trace));
  }
  return ex;
}

void Validate(const SweepSpec& spec) {
  Validate(spec.network);
  if (spec.polarization_grid.empty() || spec.budget_grid.empty() ||
      spec.seeds.empty() || spec.methods.empty()) {
    throw ValidationError("sweep grids, seeds and methods must be nonempty");
  }
  for (const double p : spec.polarization_grid) {
    if (!(p > 0.0)) throw ValidationError("polarization values must be > 0");
  }
  for (const double b : spec.budget_grid) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw ValidationError("budget values must lie in [0, 1]");
    }
  }
  for (const double b : spec.beta_sbm_grid) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw ValidationError("beta_sbm values must lie in [0, 1]");
    }
  }
  if (!spec.beta_sbm_grid.empty() && spec.network.model != GraphModel::kSbm) {
    throw ValidationError("a beta_sbm grid needs the sbm model");
  }
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end()) {
    throw ValidationError("sweep seeds must be distinct");
  }
  for (const std::string& name : spec.methods) {
    MakeMethod(name, spec.optimizer, spec.baseline);
  }
  if (spec.threads < 1) throw ValidationError("threads must be >= 1");
}

std::vector<SweepRow> RunSweep(const SweepSpec& spec) {
  Validate(spec);
  struct Cell {
    double p;
    double beta_sbm;
    double budget;
    std::uint64_t seed;
  };
  const std::vector<double> betas =
      spec.beta_sbm_grid.empty()
          ? std::vector<double>{spec.network.inter_probability}
          : spec.beta_sbm_grid;
  std::vector<Cell> cells;
  for (const double p : spec.polarization_grid) {
    for (const double beta : betas) {
      for (const double budget : spec.budget_grid) {
        for (const std::uint64_t seed : spec.seeds) {
          cells.push_back({p, beta, budget, seed});
        }
      }
    }
  }

  const std::size_t per_cell = spec.methods.size();
  std::vector<SweepRow> rows(cells.size() * per_cell);
  auto run_cell = [&](std::size_t index) {
    const Cell& cell = cells[index];
    ExperimentSpec ex;
    ex.generator = spec.network;
    if (spec.network.model == GraphModel::kSbm) {
      ex.generator.inter_probability = cell.beta_sbm;
    }
    ex.opinions = spec.opinions;
    ex.opinions.polarization = cell.p;
    ex.seed = cell.seed;
    ex.solver = spec.optimizer.solver;
    ex.record_timing = spec.record_timing;
    OptimizerConfig optimizer = spec.optimizer;
    optimizer.budget = cell.budget;
    for (const std::string& name : spec.methods) {
      ex.methods.push_back(MakeMethod(name, optimizer, spec.baseline));
    }

    SweepRow base;
    base.network = ModelName(spec.network.model);
    base.n = spec.network.n;
    base.p = cell.p;
    base.beta_sbm =
        spec.network.model == GraphModel::kSbm ? cell.beta_sbm : 0.0;
    base.budget = cell.budget;
    base.seed = cell.seed;
    try {
      const Experiment result = RunExperiment(ex);
      for (std::size_t k = 0; k < per_cell; ++k) {
        const EvalReport& r = result.reports[k];
        SweepRow row = base;
        row.m = result.graph.num_edges();
        row.method = r.method;
        row.rho_eq = r.rho_eq;
        row.rho_0 = r.rho_0;
        row.f_before = r.f_before.total;
        row.f_after = r.f_after.total;
        row.iters = r.iterations;
        row.time_s = r.wall_time_s;
        row.error = r.error;
        rows[index * per_cell + k] = std::move(row);
      }
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k < per_cell; ++k) {
        SweepRow row = base;
        row.method = ex.methods[k].name;
        row.rho_eq = row.rho_0 = std::numeric_limits<double>::quiet_NaN();
        row.f_before = row.f_after = row.rho_eq;
        row.error = e.what();
        rows[index * per_cell + k] = std::move(row);
      }
    }
    spdlog::info("sweep cell {}/{} done (p={}, beta_sbm={}, budget={}, seed={})",
                 index + 1, cells.size(), cell.p, cell.beta_sbm, cell.budget,
                 cell.seed);
  };

  const auto workers = static_cast<std::size_t>(
      std::min<std::size_t>(static_cast<std::size_t>(spec.threads),
                            cells.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
    });
  }
  for (std::thread& t : pool) t.join();
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "network,n,m,p,beta_sbm,budget,method,rho_eq,rho_0,f_before,f_after,"
         "iters,time_s,seed,error\n";
  for (const SweepRow& r : rows) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), '"', '\'');
    out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},"
                       "{:.17g},{:.17g},{},{:.6f},{},",
                       r.network, r.n, r.m, r.p, r.beta_sbm, r.budget, r.method,
                       r.rho_eq, r.rho_0, r.f_before, r.f_after, r.iters,
                       r.time_s, r.seed);
    if (!error.empty()) out << '"' << error << '"';
    out << '\n';
  }
}

Graph Cycle4Family(double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw ValidationError("cycle parameter must lie in [0, 1]");
  }
  const double b = 1.0 - a;
  return Graph::FromEdges(4, {{0, 1, a},
                              {1, 0, a},
                              {2, 3, a},
                              {3, 2, a},
                              {1, 2, b},
                              {2, 1, b},
                              {3, 0, b},
                              {0, 3, b}});
}

BruteForceResult BruteForceUndirectedOptimum(
    const std::function<Graph(double)>& family, const OpinionVector& s,
    int points, double lo, double hi) {
  if (points < 2 || !(hi > lo)) {
    throw ValidationError("grid search needs >= 2 points and hi > lo");
  }
  BruteForceResult result;
  result.best_objective = std::numeric_limits<double>::infinity();
  result.worst_objective = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double a = lo + (hi - lo) * k / (points - 1);
    const double f = DenseUndirectedObjective(ToDense(family(a)), s.values);
    if (f < result.best_objective) {
      result.best_objective = f;
      result.best_parameter = a;
    }
    result.worst_objective = std::max(result.worst_objective, f);
  }
  const bool zero_s = std::all_of(s.values.begin(), s.values.end(),
                                  [](double v) { return v == 0.0; });
  const double spread = result.worst_objective - result.best_objective;
  result.degenerate =
      zero_s ||
      spread <= 1e-12 * std::max(1.0, std::abs(result.worst_objective));
  return result;
}

}  // namespace feedbalance
