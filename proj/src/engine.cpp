#include "rtgraph/engine.hpp"

#include <stdexcept>
#include <string>

namespace rtgraph {

void ModelParams::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0, got " + std::to_string(lambda));
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1], got " + std::to_string(p));
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1], got " + std::to_string(q));
}

ArrivalType sample_arrival_type(const ModelParams& params, Rng& rng) {
  const double u = rng.uniform01() * (params.lambda + 1.0);
  if (u < params.lambda) return ArrivalType::T1;
  if (u < params.lambda + params.p) return ArrivalType::T2;
  return ArrivalType::T3;
}

ArrivalType sample_feasible_arrival_type(const ModelParams& params, std::uint64_t node_count, Rng& rng) {
  if (node_count >= 2) return sample_arrival_type(params, rng);
  const double mass = params.lambda + params.p;
  if (!(mass > 0.0)) throw std::logic_error("no feasible arrival on a one-node graph when lambda = p = 0");
  return rng.uniform01() * mass < params.lambda ? ArrivalType::T1 : ArrivalType::T2;
}

TreeId select_message_tree(const MessageForest& forest, Rng& rng) {
  if (forest.tree_count() == 0) throw std::logic_error("select_message_tree: empty forest");
  return static_cast<TreeId>(forest.size_weights().sample(rng));
}

UserId select_source_in_tree(const MessageTree& tree, double q, Rng& rng) {
  if (!tree.has_nonroot_members() || rng.bernoulli(q)) return tree.root();
  return tree.member(tree.nonroot_weights().sample(rng));
}

UserId select_t3_target(const RetweetGraph& graph, UserId source, Rng& rng) {
  const std::uint64_t n = graph.node_count();
  if (n < 2) throw std::logic_error("select_t3_target: needs at least two users");
  const auto r = static_cast<UserId>(rng.uniform_index(n - 1));
  return r < source ? r : r + 1;
}

ArrivalEvent step(GrowthState& state, const ModelParams& params, Rng& rng) {
  const RetweetGraph& graph = state.graph();
  const auto n = static_cast<UserId>(graph.node_count());
  ArrivalEvent event;
  if (n == 0) {
    event = ArrivalEvent::t1(0, 0);
  } else {
    const ArrivalType type = sample_feasible_arrival_type(params, n, rng);
    if (type == ArrivalType::T1) {
      event = ArrivalEvent::t1(n, static_cast<TreeId>(state.forest().tree_count()));
    } else {
      const TreeId tree = select_message_tree(state.forest(), rng);
      const UserId source = select_source_in_tree(state.forest().tree(tree), params.q, rng);
      event = type == ArrivalType::T2 ? ArrivalEvent::t2(source, n, tree)
                                      : ArrivalEvent::t3(source, select_t3_target(graph, source, rng), tree);
    }
  }
  state.apply(event);
  return event;
}

namespace {

// Shared driver; trace.state already holds the starting state and the
// recorder has seen it.
void run_until(SimulationTrace& trace, ProgressionRecorder& recorder, const SimulationOptions& options,
               bool empty_start) {
  const ModelParams& params = trace.params;
  Rng rng(trace.seed);
  auto advance = [&] {
    const ArrivalEvent e = step(trace.state, params, rng);
    if (options.record_events) trace.events.push_back(e);
    recorder.observe(trace.state);
  };
  if (!trace.state.initialized()) advance();

  if (const auto* nodes = std::get_if<Nodes>(&trace.stop)) {
    if (nodes->n == 0) throw std::invalid_argument("Nodes stop requires n >= 1");
    if (nodes->n < trace.state.graph().node_count())
      throw std::invalid_argument("Nodes stop n = " + std::to_string(nodes->n) + " is below the seed graph size " +
                                  std::to_string(trace.state.graph().node_count()));
    while (trace.state.graph().node_count() < nodes->n) advance();
    trace.tau_n = trace.state.t();
  } else {
    const std::uint64_t steps = std::get<Steps>(trace.stop).t;
    // The initial T1 of an empty start is time 0, not one of the steps.
    const std::uint64_t end = empty_start ? steps : trace.state.t() + steps;
    while (trace.state.t() < end) advance();
  }
  trace.stop_met = true;
  recorder.finish(trace.state);
  trace.progression = recorder.take();
}

}  // namespace

SimulationTrace simulate(const ModelParams& params, StopCondition stop, std::uint64_t seed,
                         const SimulationOptions& options, std::span<const ArrivalEvent> seed_events) {
  params.validate();
  SimulationTrace trace;
  trace.params = params;
  trace.seed = seed;
  trace.stop = stop;
  trace.state = GrowthState(options.state);
  ProgressionRecorder recorder(options.checkpoint_every);
  for (const ArrivalEvent& e : seed_events) {
    trace.state.apply(e);
    if (options.record_events) trace.events.push_back(e);
    recorder.observe(trace.state);
  }
  trace.seed_event_count = seed_events.size();
  run_until(trace, recorder, options, !trace.state.initialized());
  return trace;
}

SimulationTrace simulate_from(const GrowthState& start, const ModelParams& params, StopCondition stop,
                              std::uint64_t seed, const SimulationOptions& options) {
  params.validate();
  SimulationTrace trace;
  trace.params = params;
  trace.seed = seed;
  trace.stop = stop;
  trace.state = start;
  ProgressionRecorder recorder(options.checkpoint_every);
  if (trace.state.initialized()) recorder.observe(trace.state);
  run_until(trace, recorder, options, !trace.state.initialized());
  return trace;
}

}  // namespace rtgraph
