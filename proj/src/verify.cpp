#include "rtgraph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "rtgraph/engine.hpp"
#include "rtgraph/estimation.hpp"
#include "rtgraph/experiments.hpp"
#include "rtgraph/parallel.hpp"
#include "rtgraph/stats.hpp"
#include "rtgraph/theory.hpp"

namespace rtgraph {
namespace {

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

ClaimRecord within(std::string claim, double theoretical, double empirical, double tolerance, std::string detail = {}) {
  return {std::move(claim), theoretical, empirical, tolerance, std::abs(empirical - theoretical) <= tolerance,
          std::move(detail)};
}

MonteCarloOptions mc(const VerifyConfig& config, std::uint64_t cell) {
  MonteCarloOptions o;
  o.jobs = config.jobs;
  o.cell = cell;
  return o;
}

std::uint64_t seed_for(const VerifyConfig& config, std::uint64_t claim) {
  return derive_seed(config.base_seed, {claim});
}

// Smallest D whose asymptotic p-value falls to alpha.
double ks_critical_value(double alpha, std::size_t n) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (stats::kolmogorov_pvalue(mid, n) > alpha ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

std::vector<ClaimRecord> check_edge_density_theorem(const VerifyConfig& config) {
  const ModelParams params{0.5, 0.5, 0.9};
  const std::uint64_t n = 200;
  const std::size_t runs = 1000;
  const RunSummary s = monte_carlo(params, Nodes{n}, runs, seed_for(config, 1), mc(config, 0));

  const double mean_th = expected_edge_density(params.lambda, params.p, n);
  const double var_th = variance_edge_density(params.lambda, params.p, n);
  const double tol = 3.0 * std::sqrt(var_th / static_cast<double>(runs));

  const double dof = static_cast<double>(runs - 1);
  const double lo = var_th * stats::chi_square_quantile(0.005, dof) / dof;
  const double hi = var_th * stats::chi_square_quantile(0.995, dof) / dof;
  const double var = s.edge_density.variance;
  return {
      within("edge density mean at tau_n (lambda=0.5, p=0.5, n=200, 1000 runs) within 3 SE", mean_th,
             s.edge_density.mean, tol, format("SE from closed-form variance %.7f", var_th)),
      {"edge density variance at tau_n (lambda=0.5, p=0.5, n=200, 1000 runs) in 99% chi-square band", var_th, var,
       (hi - lo) / 2.0, var >= lo && var <= hi, format("band [%.7f, %.7f]", lo, hi)},
  };
}

std::vector<ClaimRecord> check_edges_per_tree_mean(const VerifyConfig& config) {
  const ModelParams params{1.0, 0.5, 0.9};
  const std::uint64_t t = 500;
  const RunSummary s = monte_carlo(params, Steps{t}, 1000, seed_for(config, 3), mc(config, 0));
  const Moments m = empirical_moments(std::span<const RunMetrics>(s.runs), [](const RunMetrics& r) {
    return static_cast<double>(r.edges) / static_cast<double>(r.trees);
  });
  return {within("edges per tree mean (lambda=1, t=500, 1000 runs) within 3 empirical SE",
                 expected_edges_per_tree(params.lambda, t), m.mean, 3.0 * m.standard_error,
                 format("empirical SE %.6f", m.standard_error))};
}

std::vector<ClaimRecord> check_edges_per_tree_variance(const VerifyConfig& config) {
  const ModelParams params{1.0, 0.5, 0.9};
  const std::uint64_t t = 2000;
  const RunSummary s = monte_carlo(params, Steps{t}, 3000, seed_for(config, 4), mc(config, 0));
  const Moments m = empirical_moments(std::span<const RunMetrics>(s.runs), [](const RunMetrics& r) {
    return static_cast<double>(r.edges) / static_cast<double>(r.trees);
  });
  const double scaled = m.variance / asymptotic_variance_edges_per_tree(params.lambda, t);
  return {within("scaled edges-per-tree variance lambda^3 t/(1+lambda)^2 Var (lambda=1, t=2000, 3000 runs) in "
                 "[0.85, 1.15]",
                 1.0, scaled, 0.15, format("sample variance %.7g", m.variance))};
}

std::vector<ClaimRecord> check_ratio_clt(const VerifyConfig& config) {
  const ModelParams params{1.0, 0.5, 0.9};
  const std::uint64_t t = 5000;
  const std::size_t runs = 2000;
  const RunSummary s = monte_carlo(params, Steps{t}, runs, seed_for(config, 5), mc(config, 0));
  std::vector<double> z;
  z.reserve(runs);
  for (const RunMetrics& r : s.runs) z.push_back(normalized_ratio_statistic(r.edges, r.trees, params.lambda, r.t));
  const double d = stats::ks_statistic_normal(z);
  const double pv = stats::kolmogorov_pvalue(d, runs);
  return {{"normalized ratio statistic (lambda=1, t=5000, 2000 runs) passes KS against N(0,1) at 0.01", 0.0, d,
           ks_critical_value(0.01, runs), pv > 0.01, format("KS p-value %.4f", pv)}};
}

std::vector<ClaimRecord> check_component_step_law(const VerifyConfig& config) {
  std::vector<ClaimRecord> out;
  const std::vector<std::uint64_t> sizes{2, 3};

  using boost::multiprecision::cpp_rational;
  const auto exact = one_step_component_distribution<cpp_rational>(sizes, 5, cpp_rational(1), cpp_rational(1, 2));
  const cpp_rational sum = exact.total();
  out.push_back({"one-step component law on sizes (2,3), lambda=1, p=1/2 sums to exactly 1 in rationals", 1.0,
                 static_cast<double>(sum), 0.0, sum == 1, "sum = " + sum.str()});

  // Concrete graph: tree 0 = {0, 1} and tree 1 = {2, 3, 4}, one per component.
  const std::vector<ArrivalEvent> seed{ArrivalEvent::t1(0, 0), ArrivalEvent::t2(0, 1, 0), ArrivalEvent::t1(2, 1),
                                       ArrivalEvent::t2(2, 3, 1), ArrivalEvent::t2(2, 4, 1)};
  const GrowthState start = GrowthState::from_events(seed);
  const ModelParams params{1.0, 0.5, 0.9};

  const auto law = one_step_component_distribution<double>(sizes, 5, params.lambda, params.p).by_multiset();
  std::vector<std::vector<std::uint64_t>> cells;
  std::vector<double> probs;
  for (const auto& [multiset, prob] : law) {
    cells.push_back(multiset);
    probs.push_back(prob);
  }

  const std::size_t steps = 100000;
  std::vector<std::uint64_t> counts(cells.size(), 0);
  Rng rng(seed_for(config, 6));
  for (std::size_t i = 0; i < steps; ++i) {
    GrowthState copy = start;
    step(copy, params, rng);
    std::vector<std::uint64_t> after;
    for (const ComponentInfo& c : copy.partition().components()) after.push_back(c.nodes);
    std::sort(after.begin(), after.end(), std::greater<>());
    const auto it = std::find(cells.begin(), cells.end(), after);
    if (it == cells.end()) throw std::logic_error("engine produced a component multiset outside the law's support");
    ++counts[static_cast<std::size_t>(it - cells.begin())];
  }
  const auto chi = stats::chi_square_gof(counts, probs);
  std::string freq = "frequencies";
  for (std::size_t k = 0; k < cells.size(); ++k)
    freq += format(" %.5f(expected %.5f)", static_cast<double>(counts[k]) / steps, probs[k]);
  out.push_back({"engine one-step component frequencies on sizes (2,3) (lambda=1, p=0.5, 1e5 steps) match the "
                 "law by chi-square at 0.001",
                 0.0, chi.statistic, stats::chi_square_quantile(0.999, static_cast<double>(chi.dof)),
                 chi.p_value > 0.001, format("p-value %.4f; ", chi.p_value) + freq});
  return out;
}

std::vector<ClaimRecord> check_estimator_recovery(const VerifyConfig& config) {
  const ModelParams params{0.4, 0.6, 0.9};
  const RunSummary s = monte_carlo(params, Steps{20000}, 20, seed_for(config, 7), mc(config, 0));
  double worst_l = params.lambda, worst_p = params.p;
  for (const RunMetrics& r : s.runs) {
    const double l = *estimate_lambda(r.trees, r.edges);
    const double p = estimate_p(r.nodes, r.trees, r.edges)->value;
    if (std::abs(l - params.lambda) > std::abs(worst_l - params.lambda)) worst_l = l;
    if (std::abs(p - params.p) > std::abs(worst_p - params.p)) worst_p = p;
  }
  return {
      within("every run's lambda_hat within 0.02 of 0.4 (t=20000, 20 runs); worst run reported", params.lambda,
             worst_l, 0.02),
      within("every run's p_hat within 0.015 of 0.6 (t=20000, 20 runs); worst run reported", params.p, worst_p, 0.015),
  };
}

std::vector<ClaimRecord> check_density_approximation(const VerifyConfig& config) {
  std::vector<ClaimRecord> out;
  SweepConfig grid;
  grid.lambdas = SweepConfig::default_grid();
  grid.ps = SweepConfig::default_grid();
  grid.q = 0.9;
  grid.stop = Steps{1000};
  grid.runs = 50;
  grid.base_seed = seed_for(config, 8);
  grid.jobs = config.jobs;
  const auto cells = parameter_sweep(grid);

  double worst_rel = 0.0;
  std::string worst_cell;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const int li = static_cast<int>(c / grid.ps.size()) + 1;  // lambda in tenths
    const int pi = static_cast<int>(c % grid.ps.size()) + 1;
    if (li + pi < 10) continue;
    const double target = 1.0 / (cells[c].params.lambda + cells[c].params.p);
    const double rel = std::abs(cells[c].edge_density.mean - target) / target;
    if (rel >= worst_rel) {
      worst_rel = rel;
      worst_cell = format("worst cell lambda=%.1f p=%.1f: mean %.5f vs %.5f", cells[c].params.lambda,
                          cells[c].params.p, cells[c].edge_density.mean, target);
    }
  }
  out.push_back({"mean |E|/|V| within 5% of 1/(lambda+p) on every grid cell with lambda+p >= 1 (q=0.9, t=1000, "
                 "50 runs)",
                 0.0, worst_rel, 0.05, worst_rel <= 0.05, worst_cell});

  SweepConfig line = grid;
  line.lambdas = {0.25, 0.5, 0.75, 1.0};
  line.ps = {0.5};
  line.base_seed = seed_for(config, 9);
  const auto along = parameter_sweep(line);
  double max_step = -INFINITY;
  std::string means = "means";
  for (std::size_t k = 0; k < along.size(); ++k) {
    means += format(" %.5f", along[k].edge_density.mean);
    if (k > 0) max_step = std::max(max_step, along[k].edge_density.mean - along[k - 1].edge_density.mean);
  }
  out.push_back({"mean |E|/|V| strictly decreasing in lambda at p=0.5 over {0.25,0.5,0.75,1.0}", 0.0, max_step, 0.0,
                 max_step < 0.0, "largest successive change (must be < 0); " + means});
  return out;
}

std::vector<ClaimRecord> check_degenerate_cases(const VerifyConfig& config) {
  std::vector<ClaimRecord> out;
  const std::size_t runs = 20;
  const std::uint64_t seed = seed_for(config, 10);

  {
    const ModelParams params{0.5, 1.0, 0.9};
    std::vector<std::uint64_t> excess(runs, 0), densified(runs, 0);
    parallel_for(runs, config.jobs, [&](std::size_t r) {
      const auto trace = simulate(params, Steps{2000}, derive_seed(seed, {0, r}));
      if (densification_time(trace.progression)) densified[r] = 1;
      for (const ComponentInfo& c : trace.state.partition().components())
        if (c.edges + 1 != c.nodes) ++excess[r];
    });
    std::uint64_t bad = 0, dens = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      bad += excess[r];
      dens += densified[r];
    }
    out.push_back({"p=1: every component is a tree and the LCC never densifies (lambda=0.5, t=2000, 20 runs)", 0.0,
                   static_cast<double>(bad + dens), 0.0, bad == 0 && dens == 0,
                   format("non-tree components %llu, densified runs %llu", static_cast<unsigned long long>(bad),
                          static_cast<unsigned long long>(dens))});
  }
  {
    const ModelParams params{0.5, 0.5, 1.0};
    std::vector<std::uint64_t> off_root(runs, 0);
    parallel_for(runs, config.jobs, [&](std::size_t r) {
      SimulationOptions o;
      o.checkpoint_every = 0;
      const auto trace = simulate(params, Steps{2000}, derive_seed(seed, {1, r}), o);
      const auto nodes = trace.state.graph().nodes();
      for (const EdgeRecord& e : trace.state.graph().edges())
        if (nodes[e.source].type != ArrivalType::T1) ++off_root[r];
    });
    std::uint64_t bad = 0;
    for (auto b : off_root) bad += b;
    out.push_back({"q=1: every edge source is a message-tree root (lambda=0.5, p=0.5, t=2000, 20 runs)", 0.0,
                   static_cast<double>(bad), 0.0, bad == 0, "edges with non-root source"});
  }
  {
    const ModelParams params{1000.0, 0.5, 0.9};
    const RunSummary s = monte_carlo(params, Steps{10000}, 5, derive_seed(seed, {2}), mc(config, 0));
    double worst = 0.0;
    for (const RunMetrics& r : s.runs) worst = std::max(worst, r.edge_density());
    out.push_back({"lambda=1000: |E|/|V| < 0.01 at t=10^4 (5 runs, largest reported)", 0.0, worst, 0.01,
                   worst < 0.01, format("closed form 1/(lambda+p) = %.6f", 1.0 / 1000.5)});
  }
  return out;
}

std::vector<ClaimRecord> check_replay_consistency(const VerifyConfig& config) {
  const ModelParams truth{0.3, 0.7, 0.9};
  const std::uint64_t n = 5000;
  const auto ground = simulate(truth, Nodes{n}, seed_for(config, 11));

  ReplayConfig replay;
  replay.reference = ground.events;
  replay.q = truth.q;
  replay.target_nodes = n;
  replay.runs = 50;
  replay.base_seed = seed_for(config, 12);
  replay.jobs = config.jobs;
  const auto result = replay_from_graph(replay);
  const auto& c = result.comparison;
  const double ref = c.reference.lcc_density();
  return {{"replay from densification (truth lambda=0.3, p=0.7, q=0.9, 5000 nodes, 50 replays): ground-truth "
           "|E_LCC|/|V_LCC| inside the replays' 5-95 percentile band",
           c.lcc_density.mean, ref, (c.lcc_density.p95 - c.lcc_density.p05) / 2.0,
           ref >= c.lcc_density.p05 && ref <= c.lcc_density.p95,
           format("densification step %llu (%llu nodes), estimates lambda=%.4f p=%.4f, band [%.5f, %.5f]",
                  static_cast<unsigned long long>(c.start_step), static_cast<unsigned long long>(c.seed_nodes),
                  c.params.lambda, c.params.p, c.lcc_density.p05, c.lcc_density.p95)}};
}

std::vector<ClaimRecord> check_closed_forms(const VerifyConfig&) {
  const double stat = normalized_ratio_statistic(55, 46, 1.0, 100);
  return {
      within("edge density closed form at lambda=0.5, p=0.5, n=100", 0.99, expected_edge_density(0.5, 0.5, 100),
             1e-12),
      within("edge density variance closed form at lambda=0.5, p=0.5, n=200", 0.004975,
             variance_edge_density(0.5, 0.5, 200), 1e-12),
      within("edges per tree closed form at lambda=1, t=1", 0.5, expected_edges_per_tree(1.0, 1), 1e-12),
      within("asymptotic edges-per-tree variance at lambda=1, t=2000", 0.002,
             asymptotic_variance_edges_per_tree(1.0, 2000), 1e-12),
      within("normalized ratio statistic for edges=55, trees=46, lambda=1, t=100", 5.0 * 9.0 / 46.0, stat, 1e-12),
  };
}

std::vector<ClaimRecord> verify_theorems(const VerifyConfig& config) {
  using Check = std::vector<ClaimRecord> (*)(const VerifyConfig&);
  std::vector<Check> checks;
  if (config.suite == "full") {
    checks = {check_closed_forms,          check_edge_density_theorem, check_edges_per_tree_mean,
              check_edges_per_tree_variance, check_ratio_clt,           check_component_step_law,
              check_estimator_recovery,    check_density_approximation, check_degenerate_cases,
              check_replay_consistency};
  } else if (config.suite == "quick") {
    checks = {check_closed_forms, check_component_step_law, check_degenerate_cases};
  } else {
    throw std::invalid_argument("unknown verification suite '" + config.suite + "' (expected full or quick)");
  }
  std::vector<ClaimRecord> out;
  for (Check check : checks)
    for (ClaimRecord& r : check(config)) out.push_back(std::move(r));
  return out;
}

void write_verification_report(std::ostream& out, const std::vector<ClaimRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ClaimRecord& r : records) {
    nlohmann::ordered_json j;
    j["claim"] = r.claim;
    j["theoretical"] = r.theoretical;
    j["empirical"] = r.empirical;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace rtgraph
