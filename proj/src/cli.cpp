#include "rtgraph/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtgraph/engine.hpp"
#include "rtgraph/estimation.hpp"
#include "rtgraph/event_log.hpp"
#include "rtgraph/experiments.hpp"
#include "rtgraph/ingest.hpp"
#include "rtgraph/progression.hpp"
#include "rtgraph/verify.hpp"

namespace rtgraph::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Tracks files written by a command so they can be removed on failure.
class Outputs {
 public:
  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only if empty
  }

  void directory(const fs::path& dir) {
    if (fs::exists(dir)) {
      if (!fs::is_directory(dir)) throw std::runtime_error("output path '" + dir.string() + "' is not a directory");
      return;
    }
    std::vector<fs::path> created;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      created.push_back(p);
      if (p == p.parent_path()) break;
    }
    fs::create_directories(dir);
    dirs_.insert(dirs_.end(), created.rbegin(), created.rend());
  }

  void write(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) directory(path.parent_path());
    files_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  }

  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

struct StopFlags {
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> nodes;

  void add_to(CLI::App& app) {
    auto* s = app.add_option("--steps", steps, "Stop after this many steps");
    auto* n = app.add_option("--nodes", nodes, "Stop when the graph reaches this many users");
    s->excludes(n);
  }

  StopCondition resolve(std::optional<StopCondition> fallback = std::nullopt) const {
    if (steps) return Steps{*steps};
    if (nodes) return Nodes{*nodes};
    if (fallback) return *fallback;
    throw CLI::ValidationError("stop condition", "exactly one of --steps / --nodes is required");
  }
};

Json stop_json(const StopCondition& stop) {
  Json j;
  if (const auto* s = std::get_if<Steps>(&stop)) {
    j["steps"] = s->t;
  } else {
    j["nodes"] = std::get<Nodes>(stop).n;
  }
  return j;
}

Json params_json(const ModelParams& p) { return Json{{"lambda", p.lambda}, {"p", p.p}, {"q", p.q}}; }

Json row_json(const ProgressionRow& r) {
  return Json{{"t", r.t},
              {"V", r.nodes},
              {"E", r.edges},
              {"T", r.trees},
              {"V_lcc", r.lcc_nodes},
              {"E_lcc", r.lcc_edges},
              {"edge_density", r.edge_density()},
              {"lcc_density", r.lcc_density()},
              {"lcc_fraction", r.lcc_fraction()}};
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// ------------------------------------------------------------ simulate

struct SimulateCmd {
  ModelParams params;
  StopFlags stop;
  std::uint64_t seed = 0;
  std::string seed_graph;
  bool trees_grow_on_t3 = true;
  std::uint64_t checkpoint_every = 1;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--lambda", params.lambda, "New-discussion intensity")->required();
    app.add_option("--p", params.p, "Probability that a retweet comes from a new user")->required();
    app.add_option("--q", params.q, "Superstar weight")->capture_default_str();
    stop.add_to(app);
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--seed-graph", seed_graph, "Event log to start from instead of a single node");
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3, "T3 retweeters join the retweeted tree")
        ->capture_default_str();
    app.add_option("--checkpoint-every", checkpoint_every, "Progression cadence in events")->capture_default_str();
    app.add_option("-o,--output", output, "Output directory")->required();
  }

  void run(const Context& ctx) const {
    SimulationOptions options;
    options.state.trees_grow_on_t3 = trees_grow_on_t3;
    options.checkpoint_every = checkpoint_every;
    std::vector<ArrivalEvent> seed_events;
    if (!seed_graph.empty()) seed_events = read_event_log_file(seed_graph);
    const auto trace = simulate(params, stop.resolve(), seed, options, seed_events);

    Outputs outputs;
    const fs::path dir(output);
    outputs.directory(dir);
    outputs.write(dir / "events.jsonl", [&](std::ostream& o) { write_event_log(o, trace.events); });
    outputs.write(dir / "progression.csv", [&](std::ostream& o) { write_progression_csv(o, trace.progression); });
    outputs.write(dir / "trace.json", [&](std::ostream& o) {
      const auto& c = trace.state.graph().counters();
      Json j;
      j["params"] = params_json(trace.params);
      j["seed"] = trace.seed;
      j["stop"] = stop_json(trace.stop);
      j["trees_grow_on_t3"] = trees_grow_on_t3;
      j["seed_events"] = trace.seed_event_count;
      j["stop_met"] = trace.stop_met;
      j["tau_n"] = trace.tau_n ? Json(*trace.tau_n) : Json(nullptr);
      j["counters"] = Json{{"t1", c.t1}, {"t2", c.t2}, {"t3", c.t3}, {"t", c.t()}};
      j["final"] = row_json(ProgressionRow::capture(trace.state));
      const auto dens = densification_time(trace.progression);
      j["densification_t"] = dens ? Json(*dens) : Json(nullptr);
      o << j.dump(2) << '\n';
    });
    outputs.commit();
    const ProgressionRow last = ProgressionRow::capture(trace.state);
    ctx.out << "simulated t=" << last.t << " |V|=" << last.nodes << " |E|=" << last.edges << " |T|=" << last.trees
            << " -> " << output << '\n';
  }
};

// --------------------------------------------------------------- sweep

struct SweepCmd {
  std::vector<double> lambdas = SweepConfig::default_grid();
  std::vector<double> ps = SweepConfig::default_grid();
  double q = 0.9;
  StopFlags stop;
  std::size_t runs = 50;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool trees_grow_on_t3 = true;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--lambdas", lambdas, "Lambda grid (comma separated)")->delimiter(',');
    app.add_option("--ps", ps, "p grid (comma separated)")->delimiter(',');
    app.add_option("--q", q)->capture_default_str();
    stop.add_to(app);
    app.add_option("--runs", runs)->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3)->capture_default_str();
    app.add_option("-o,--output", output, "Sweep CSV path")->required();
  }

  void run(const Context& ctx) const {
    SweepConfig config;
    config.lambdas = lambdas;
    config.ps = ps;
    config.q = q;
    config.stop = stop.resolve(Steps{1000});
    config.runs = runs;
    config.base_seed = seed;
    config.jobs = jobs;
    config.state.trees_grow_on_t3 = trees_grow_on_t3;
    const auto cells = parameter_sweep(config);
    Outputs outputs;
    outputs.write(output, [&](std::ostream& o) { write_sweep_csv(o, cells); });
    outputs.commit();
    ctx.out << "swept " << cells.size() << " cells x " << runs << " runs -> " << output << '\n';
  }
};

// -------------------------------------------------------------- replay

struct ReplayCmd {
  std::string input;
  std::optional<std::uint64_t> from_step;
  std::optional<double> lambda;
  std::optional<double> p;
  double q = 0.9;
  std::optional<std::uint64_t> target_nodes;
  std::size_t runs = 50;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool trees_grow_on_t3 = true;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "Reference event log (JSONL)")->required()->check(CLI::ExistingFile);
    app.add_option("--from-step", from_step, "Start step (default: LCC densification)");
    app.add_option("--lambda", lambda, "Override the estimated lambda");
    app.add_option("--p", p, "Override the estimated p");
    app.add_option("--q", q)->capture_default_str();
    app.add_option("--target-nodes", target_nodes, "Grow to this many users (default: reference size)");
    app.add_option("--runs", runs)->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--jobs", jobs)->capture_default_str();
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3)->capture_default_str();
    app.add_option("-o,--output", output, "Comparison CSV path")->required();
  }

  void run(const Context& ctx) const {
    ReplayConfig config;
    config.reference = read_event_log_file(input);
    config.start_step = from_step;
    config.lambda = lambda;
    config.p = p;
    config.q = q;
    config.target_nodes = target_nodes;
    config.runs = runs;
    config.base_seed = seed;
    config.jobs = jobs;
    config.state.trees_grow_on_t3 = trees_grow_on_t3;
    const auto result = replay_from_graph(config);
    Outputs outputs;
    outputs.write(output, [&](std::ostream& o) { write_replay_csv(o, result.comparison); });
    outputs.commit();
    const auto& c = result.comparison;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "replayed from t=%llu (lambda=%.4f p=%.4f q=%.2f): actual %.2f %.2f %.2f | simulated %.2f %.2f "
                  "%.2f\n",
                  static_cast<unsigned long long>(c.start_step), c.params.lambda, c.params.p, c.params.q,
                  c.reference.lcc_fraction(), c.reference.edge_density(), c.reference.lcc_density(),
                  c.lcc_fraction.mean, c.edge_density.mean, c.lcc_density.mean);
    ctx.out << buf;
  }
};

// ------------------------------------------------------------ estimate

struct EstimateCmd {
  std::string input;
  std::uint64_t checkpoint_every = 1;
  bool trees_grow_on_t3 = true;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "Event log (JSONL)")->required()->check(CLI::ExistingFile);
    app.add_option("--checkpoint-every", checkpoint_every)->capture_default_str();
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3)->capture_default_str();
    app.add_option("-o,--output", output, "Estimate CSV path (default: standard output)");
  }

  void run(const Context& ctx) const {
    const auto events = read_event_log_file(input);
    const auto progression = replay_progression(events, {trees_grow_on_t3}, checkpoint_every);
    const auto series = estimate_series(progression);

    std::ostringstream summary;
    if (!series.rows.empty() && series.rows.back().defined()) {
      const auto& last = series.rows.back();
      char buf[128];
      std::snprintf(buf, sizeof buf, "final t=%llu lambda_hat=%.6f p_hat=%.6f%s\n",
                    static_cast<unsigned long long>(last.t), *last.lambda_hat, last.p_hat->value,
                    last.p_hat->out_of_range ? " (p_hat outside [0,1])" : "");
      summary << buf;
    } else {
      summary << "estimates undefined: no edges\n";
    }
    if (output.empty()) {
      write_estimates_csv(ctx.out, series);
      ctx.err << summary.str();
      return;
    }
    Outputs outputs;
    outputs.write(output, [&](std::ostream& o) { write_estimates_csv(o, series); });
    outputs.commit();
    ctx.out << summary.str();
  }
};

// ------------------------------------------------------------- analyze

struct AnalyzeCmd {
  std::string input;
  std::uint64_t checkpoint_every = 1;
  bool trees_grow_on_t3 = true;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "Event log (JSONL)")->required()->check(CLI::ExistingFile);
    app.add_option("--checkpoint-every", checkpoint_every)->capture_default_str();
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3)->capture_default_str();
    app.add_option("-o,--output", output, "Output directory")->required();
  }

  void run(const Context& ctx) const {
    const auto events = read_event_log_file(input);
    const StateOptions options{trees_grow_on_t3};
    const auto progression = replay_progression(events, options, checkpoint_every);
    // Densification is reported at full resolution regardless of cadence.
    const auto dens = densification_time(checkpoint_every == 1 ? progression : replay_progression(events, options));
    const GrowthState state = GrowthState::from_events(events, options);
    const auto degrees = degree_distribution(state.graph());

    Outputs outputs;
    const fs::path dir(output);
    outputs.directory(dir);
    outputs.write(dir / "progression.csv", [&](std::ostream& o) { write_progression_csv(o, progression); });
    outputs.write(dir / "report.json", [&](std::ostream& o) {
      Json j;
      j["events"] = events.size();
      j["densification_t"] = dens ? Json(*dens) : Json(nullptr);
      if (dens) {
        const GrowthState at = GrowthState::from_events(std::span(events.data(), *dens + 1), options);
        j["at_densification"] = row_json(ProgressionRow::capture(at));
      }
      j["final"] = state.initialized() ? row_json(ProgressionRow::capture(state)) : Json(nullptr);
      j["components"] = state.partition().component_count();
      j["in_degree_histogram"] = degrees.in;
      j["out_degree_histogram"] = degrees.out;
      o << j.dump(2) << '\n';
    });
    outputs.commit();
    if (dens) {
      ctx.out << "LCC densifies at t=" << *dens << '\n';
    } else {
      ctx.out << "LCC never densifies\n";
    }
  }
};

// -------------------------------------------------------------- verify

struct VerifyCmd {
  VerifyConfig config;
  bool strict = false;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--suite", config.suite, "full or quick")
        ->check(CLI::IsMember({"full", "quick"}))
        ->capture_default_str();
    app.add_option("--seed", config.base_seed)->capture_default_str();
    app.add_option("--jobs", config.jobs)->capture_default_str();
    app.add_flag("--strict", strict, "Exit non-zero when a claim fails");
    app.add_option("-o,--output", output, "Report JSON path")->required();
  }

  int run(const Context& ctx) const {
    const auto records = verify_theorems(config);
    Outputs outputs;
    outputs.write(output, [&](std::ostream& o) { write_verification_report(o, records); });
    outputs.commit();
    std::size_t failed = 0;
    for (const auto& r : records) {
      ctx.out << (r.pass ? "PASS  " : "FAIL  ") << r.claim << '\n';
      if (!r.pass) ++failed;
    }
    ctx.out << records.size() - failed << '/' << records.size() << " claims passed -> " << output << '\n';
    return strict && failed > 0 ? 3 : 0;
  }
};

// -------------------------------------------------------------- ingest

struct IngestCmd {
  std::string input;
  std::string format = "jsonl";
  std::uint64_t checkpoint_every = 1;
  bool trees_grow_on_t3 = true;
  std::string output;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "Tweet file")->required()->check(CLI::ExistingFile);
    app.add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
    app.add_option("--checkpoint-every", checkpoint_every)->capture_default_str();
    app.add_option("--trees-grow-on-t3", trees_grow_on_t3)->capture_default_str();
    app.add_option("-o,--output", output, "Output directory")->required();
  }

  void run(const Context& ctx) const {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + input + "'");
    const auto parsed = parse_stream(in, tweet_format_from_string(format));
    const auto result = build_progression(parsed.records, {trees_grow_on_t3}, checkpoint_every);
    const auto hours = hourly_stats(parsed.records, result);

    Outputs outputs;
    const fs::path dir(output);
    outputs.directory(dir);
    outputs.write(dir / "events.jsonl", [&](std::ostream& o) { write_event_log(o, result.events); });
    outputs.write(dir / "progression.csv", [&](std::ostream& o) { write_progression_csv(o, result.progression); });
    outputs.write(dir / "hourly.csv", [&](std::ostream& o) { write_hourly_csv(o, hours); });
    outputs.write(dir / "users.csv", [&](std::ostream& o) {
      o << "id,user_id\n";
      for (std::size_t i = 0; i < result.user_names.size(); ++i) o << i << ',' << result.user_names[i] << '\n';
    });
    outputs.write(dir / "summary.json", [&](std::ostream& o) {
      const auto& c = result.counters;
      Json j;
      j["records"] = parsed.records.size();
      j["malformed_lines"] = parsed.malformed_lines;
      j["duplicates"] = parsed.duplicates;
      j["t1"] = c.t1;
      j["t2"] = c.t2;
      j["t3"] = c.t3;
      j["skipped_originals"] = c.skipped_originals;
      j["self_retweets"] = c.self_retweets;
      j["materialized_authors"] = c.materialized_authors;
      const auto dens = densification_time(result.progression);
      j["densification_t"] = dens ? Json(*dens) : Json(nullptr);
      j["final"] = result.state.initialized() ? row_json(ProgressionRow::capture(result.state)) : Json(nullptr);
      o << j.dump(2) << '\n';
    });
    outputs.commit();
    if (parsed.malformed_lines > 0) ctx.err << "warning: skipped " << parsed.malformed_lines << " malformed lines\n";
    ctx.out << "ingested " << parsed.records.size() << " records into " << result.events.size() << " events -> "
            << output << '\n';
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retweet-graph growth model: simulation, theory checks and estimation", "rtgraph"};
  app.require_subcommand(1);

  SimulateCmd simulate_cmd;
  SweepCmd sweep_cmd;
  ReplayCmd replay_cmd;
  EstimateCmd estimate_cmd;
  AnalyzeCmd analyze_cmd;
  VerifyCmd verify_cmd;
  IngestCmd ingest_cmd;
  auto* simulate = app.add_subcommand("simulate", "Grow one graph and write its trace");
  simulate_cmd.add_to(*simulate);
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo over a (lambda, p) grid");
  sweep_cmd.add_to(*sweep);
  auto* replay = app.add_subcommand("replay", "Regrow a reference graph from its densification point");
  replay_cmd.add_to(*replay);
  auto* estimate = app.add_subcommand("estimate", "Estimate lambda and p along an event log");
  estimate_cmd.add_to(*estimate);
  auto* analyze = app.add_subcommand("analyze", "Progression statistics and densification of an event log");
  analyze_cmd.add_to(*analyze);
  auto* verify = app.add_subcommand("verify", "Run the theorem-verification battery");
  verify_cmd.add_to(*verify);
  auto* ingest = app.add_subcommand("ingest", "Build a progression from a tweet file");
  ingest_cmd.add_to(*ingest);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const Context ctx{out, err};
  try {
    if (simulate->parsed()) simulate_cmd.run(ctx);
    if (sweep->parsed()) sweep_cmd.run(ctx);
    if (replay->parsed()) replay_cmd.run(ctx);
    if (estimate->parsed()) estimate_cmd.run(ctx);
    if (analyze->parsed()) analyze_cmd.run(ctx);
    if (verify->parsed()) return verify_cmd.run(ctx);
    if (ingest->parsed()) ingest_cmd.run(ctx);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "rtgraph: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rtgraph::cli
