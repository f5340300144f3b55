#pragma once

// Monte Carlo harness: repeated runs, parameter grids and the replay of a
// reference progression from its densification point.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rtgraph/engine.hpp"
#include "rtgraph/theory.hpp"

namespace rtgraph {

/// Final-state metrics of one run.
struct RunMetrics {
  std::uint64_t t = 0;
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t trees = 0;
  std::uint64_t lcc_nodes = 0;
  std::uint64_t lcc_edges = 0;
  std::uint64_t components = 0;

  static RunMetrics of(const GrowthState& state);
  double edge_density() const { return static_cast<double>(edges) / static_cast<double>(nodes); }
  double lcc_density() const { return static_cast<double>(lcc_edges) / static_cast<double>(lcc_nodes); }
  double lcc_fraction() const { return static_cast<double>(lcc_nodes) / static_cast<double>(nodes); }
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct RunSummary {
  ModelParams params;
  StopCondition stop;
  std::vector<RunMetrics> runs;  // in run-index order
  Moments nodes, edges, trees, components;
  Moments edge_density, lcc_fraction, lcc_density;

  static RunSummary aggregate(const ModelParams& params, StopCondition stop, std::vector<RunMetrics> runs);
};

struct MonteCarloOptions {
  std::size_t jobs = 1;
  std::uint64_t cell = 0;  // stream id; run r uses derive_seed(base, {cell, r})
  StateOptions state;
};

RunSummary monte_carlo(const ModelParams& params, StopCondition stop, std::size_t runs, std::uint64_t base_seed,
                       const MonteCarloOptions& options = {});

struct SweepConfig {
  std::vector<double> lambdas;
  std::vector<double> ps;
  double q = 0.9;
  StopCondition stop = Steps{1000};
  std::size_t runs = 50;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
  StateOptions state;

  static std::vector<double> default_grid();  // 0.1, 0.2, ..., 1.0
};

/// Cells ordered lambda-major; cell k = (lambdas[k / ps.size()], ps[k % ps.size()]).
std::vector<RunSummary> parameter_sweep(const SweepConfig& config);

/// Header lambda,p,q,t,runs,mean_edge_density,se_edge_density,
/// mean_lcc_fraction,se_lcc_fraction,mean_lcc_density,se_lcc_density.
void write_sweep_csv(std::ostream& out, const std::vector<RunSummary>& cells);

struct ReplayConfig {
  std::vector<ArrivalEvent> reference;        // full reference progression
  std::optional<std::uint64_t> start_step;    // default: LCC densification step
  std::optional<double> lambda;               // default: estimate at start
  std::optional<double> p;                    // default: estimate at start
  double q = 0.9;
  std::optional<std::uint64_t> target_nodes;  // default: reference final |V|
  std::size_t runs = 50;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
  StateOptions state;
};

struct MetricBand {
  double mean = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
};

struct ReplayComparison {
  std::uint64_t start_step = 0;
  std::uint64_t seed_nodes = 0;
  std::uint64_t target_nodes = 0;
  ModelParams params;       // parameters used for the replays
  bool p_clamped = false;   // estimated p fell outside [0, 1]
  RunMetrics reference;     // reference graph when it first reaches target_nodes
  MetricBand lcc_fraction, edge_density, lcc_density;
};

struct ReplayResult {
  ReplayComparison comparison;
  RunSummary summary;
};

/// Cuts the reference at `start_step`, estimates (lambda, p) there unless
/// supplied, and grows `runs` independent copies to `target_nodes`.
ReplayResult replay_from_graph(const ReplayConfig& config);

void write_replay_csv(std::ostream& out, const ReplayComparison& comparison);

}  // namespace rtgraph
