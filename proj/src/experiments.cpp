#include "rtgraph/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rtgraph/estimation.hpp"
#include "rtgraph/parallel.hpp"
#include "rtgraph/stats.hpp"

namespace rtgraph {

RunMetrics RunMetrics::of(const GrowthState& state) {
  const RetweetGraph& g = state.graph();
  const LccStats lcc = lcc_stats(state.partition());
  return {state.t(),  g.node_count(), g.edge_count(), state.forest().tree_count(), lcc.nodes, lcc.edges,
          state.partition().component_count()};
}

namespace {

Moments moments_of(const std::vector<RunMetrics>& runs, double (*metric)(const RunMetrics&)) {
  if (runs.size() == 1) return {metric(runs.front()), 0.0, 0.0, 1};
  return empirical_moments(std::span<const RunMetrics>(runs), metric);
}

SimulationOptions final_state_only(StateOptions state) {
  SimulationOptions options;
  options.state = state;
  options.checkpoint_every = 0;
  options.record_events = false;
  return options;
}

}  // namespace

RunSummary RunSummary::aggregate(const ModelParams& params, StopCondition stop, std::vector<RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("RunSummary needs at least one run");
  RunSummary s;
  s.params = params;
  s.stop = stop;
  s.runs = std::move(runs);
  s.nodes = moments_of(s.runs, [](const RunMetrics& m) { return static_cast<double>(m.nodes); });
  s.edges = moments_of(s.runs, [](const RunMetrics& m) { return static_cast<double>(m.edges); });
  s.trees = moments_of(s.runs, [](const RunMetrics& m) { return static_cast<double>(m.trees); });
  s.components = moments_of(s.runs, [](const RunMetrics& m) { return static_cast<double>(m.components); });
  s.edge_density = moments_of(s.runs, [](const RunMetrics& m) { return m.edge_density(); });
  s.lcc_fraction = moments_of(s.runs, [](const RunMetrics& m) { return m.lcc_fraction(); });
  s.lcc_density = moments_of(s.runs, [](const RunMetrics& m) { return m.lcc_density(); });
  return s;
}

RunSummary monte_carlo(const ModelParams& params, StopCondition stop, std::size_t runs, std::uint64_t base_seed,
                       const MonteCarloOptions& options) {
  if (runs == 0) throw std::invalid_argument("monte_carlo: runs must be >= 1");
  params.validate();
  const SimulationOptions sim = final_state_only(options.state);
  std::vector<RunMetrics> metrics(runs);
  parallel_for(runs, options.jobs, [&](std::size_t r) {
    const auto trace = simulate(params, stop, derive_seed(base_seed, {options.cell, r}), sim);
    metrics[r] = RunMetrics::of(trace.state);
  });
  return RunSummary::aggregate(params, stop, std::move(metrics));
}

std::vector<double> SweepConfig::default_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<RunSummary> parameter_sweep(const SweepConfig& config) {
  if (config.lambdas.empty() || config.ps.empty()) throw std::invalid_argument("sweep grids must be non-empty");
  if (config.runs == 0) throw std::invalid_argument("sweep runs must be >= 1");
  const std::size_t cells = config.lambdas.size() * config.ps.size();
  const std::size_t total = cells * config.runs;
  const SimulationOptions sim = final_state_only(config.state);

  std::vector<ModelParams> params(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    params[c] = {config.lambdas[c / config.ps.size()], config.ps[c % config.ps.size()], config.q};
    params[c].validate();
  }
  // Flatten (cell, run) so small grids still spread over all workers.
  std::vector<RunMetrics> metrics(total);
  parallel_for(total, config.jobs, [&](std::size_t k) {
    const std::size_t c = k / config.runs;
    const std::size_t r = k % config.runs;
    const auto trace = simulate(params[c], config.stop, derive_seed(config.base_seed, {c, r}), sim);
    metrics[k] = RunMetrics::of(trace.state);
  });

  std::vector<RunSummary> out;
  out.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<RunMetrics> cell(metrics.begin() + static_cast<std::ptrdiff_t>(c * config.runs),
                                 metrics.begin() + static_cast<std::ptrdiff_t>((c + 1) * config.runs));
    out.push_back(RunSummary::aggregate(params[c], config.stop, std::move(cell)));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<RunSummary>& cells) {
  out << "lambda,p,q,t,runs,mean_edge_density,se_edge_density,mean_lcc_fraction,se_lcc_fraction,"
         "mean_lcc_density,se_lcc_density\n";
  char buf[256];
  for (const RunSummary& s : cells) {
    const auto* steps = std::get_if<Steps>(&s.stop);
    std::snprintf(buf, sizeof buf, "%g,%g,%g,", s.params.lambda, s.params.p, s.params.q);
    out << buf;
    if (steps) out << steps->t;
    out << ',' << s.runs.size();
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", s.edge_density.mean,
                  s.edge_density.standard_error, s.lcc_fraction.mean, s.lcc_fraction.standard_error,
                  s.lcc_density.mean, s.lcc_density.standard_error);
    out << buf;
  }
}

namespace {

MetricBand band_of(const std::vector<RunMetrics>& runs, double (*metric)(const RunMetrics&)) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const RunMetrics& m : runs) v.push_back(metric(m));
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  return {mean, stats::percentile(v, 0.05), stats::percentile(v, 0.95)};
}

}  // namespace

ReplayResult replay_from_graph(const ReplayConfig& config) {
  if (config.reference.empty()) throw std::invalid_argument("replay: empty reference event log");
  if (config.runs == 0) throw std::invalid_argument("replay: runs must be >= 1");

  // One pass over the reference: progression for the densification step and
  // the reference metrics at the target size.
  GrowthState reference(config.state);
  ProgressionRecorder recorder(1);
  for (const ArrivalEvent& e : config.reference) {
    reference.apply(e);
    recorder.observe(reference);
  }
  const ProgressionStats progression = recorder.take();
  const std::uint64_t final_nodes = reference.graph().node_count();

  ReplayComparison cmp;
  if (config.start_step) {
    cmp.start_step = *config.start_step;
  } else {
    const auto dens = densification_time(progression);
    if (!dens) throw std::invalid_argument("replay: the reference LCC never densifies; pass an explicit start step");
    cmp.start_step = *dens;
  }
  if (cmp.start_step >= config.reference.size())
    throw std::invalid_argument("replay: start step beyond the reference progression");

  const std::span<const ArrivalEvent> prefix(config.reference.data(), cmp.start_step + 1);
  const GrowthState seed = GrowthState::from_events(prefix, config.state);
  cmp.seed_nodes = seed.graph().node_count();
  cmp.target_nodes = config.target_nodes.value_or(final_nodes);
  if (cmp.target_nodes < cmp.seed_nodes)
    throw std::invalid_argument("replay: target node count " + std::to_string(cmp.target_nodes) +
                                " is below the seed graph size " + std::to_string(cmp.seed_nodes));

  // Reference metrics when it first holds target_nodes users (or at its end).
  {
    const ProgressionRow* at = &progression.rows.back();
    for (const ProgressionRow& r : progression.rows)
      if (r.nodes >= cmp.target_nodes) {
        at = &r;
        break;
      }
    const GrowthState ref_at =
        GrowthState::from_events(std::span(config.reference.data(), at->t + 1), config.state);
    cmp.reference = RunMetrics::of(ref_at);
  }

  const ProgressionRow seed_row = ProgressionRow::capture(seed);
  cmp.params.q = config.q;
  if (config.lambda) {
    cmp.params.lambda = *config.lambda;
  } else {
    const auto l = estimate_lambda(seed_row.trees, seed_row.edges);
    if (!l) throw std::invalid_argument("replay: cannot estimate lambda from an edgeless seed graph");
    cmp.params.lambda = *l;
  }
  if (config.p) {
    cmp.params.p = *config.p;
  } else {
    const auto p = estimate_p(seed_row.nodes, seed_row.trees, seed_row.edges);
    if (!p) throw std::invalid_argument("replay: cannot estimate p from an edgeless seed graph");
    cmp.params.p = std::clamp(p->value, 0.0, 1.0);
    cmp.p_clamped = p->out_of_range;
  }
  cmp.params.validate();

  SimulationOptions sim;
  sim.checkpoint_every = 0;
  sim.record_events = false;
  std::vector<RunMetrics> metrics(config.runs);
  parallel_for(config.runs, config.jobs, [&](std::size_t r) {
    const auto trace = simulate_from(seed, cmp.params, Nodes{cmp.target_nodes}, derive_seed(config.base_seed, {0, r}),
                                     sim);
    metrics[r] = RunMetrics::of(trace.state);
  });

  cmp.lcc_fraction = band_of(metrics, [](const RunMetrics& m) { return m.lcc_fraction(); });
  cmp.edge_density = band_of(metrics, [](const RunMetrics& m) { return m.edge_density(); });
  cmp.lcc_density = band_of(metrics, [](const RunMetrics& m) { return m.lcc_density(); });
  return {cmp, RunSummary::aggregate(cmp.params, Nodes{cmp.target_nodes}, std::move(metrics))};
}

void write_replay_csv(std::ostream& out, const ReplayComparison& c) {
  out << "start_step,seed_nodes,target_nodes,lambda,p,q,p_clamped,"
         "ref_lcc_fraction,ref_edge_density,ref_lcc_density,"
         "sim_lcc_fraction,sim_edge_density,sim_lcc_density,"
         "sim_lcc_fraction_p05,sim_lcc_fraction_p95,sim_edge_density_p05,sim_edge_density_p95,"
         "sim_lcc_density_p05,sim_lcc_density_p95\n";
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%llu,%llu,%llu,%.6f,%.6f,%.6f,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                static_cast<unsigned long long>(c.start_step), static_cast<unsigned long long>(c.seed_nodes),
                static_cast<unsigned long long>(c.target_nodes), c.params.lambda, c.params.p, c.params.q,
                c.p_clamped ? 1 : 0, c.reference.lcc_fraction(), c.reference.edge_density(),
                c.reference.lcc_density(), c.lcc_fraction.mean, c.edge_density.mean, c.lcc_density.mean,
                c.lcc_fraction.p05, c.lcc_fraction.p95, c.edge_density.p05, c.edge_density.p95, c.lcc_density.p05,
                c.lcc_density.p95);
  out << buf;
}

}  // namespace rtgraph
