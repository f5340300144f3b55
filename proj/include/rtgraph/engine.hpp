#pragma once

// Stochastic growth process. Each step draws an arrival type with
// probabilities lambda/(lambda+1), p/(lambda+1), (1-p)/(lambda+1); T2 and T3
// pick a message tree proportionally to its size, then a source inside the
// tree (the root with probability q, otherwise a non-root member with weight
// children + 1); a T3 target is uniform over the other users.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rtgraph/graph.hpp"
#include "rtgraph/progression.hpp"
#include "rtgraph/random.hpp"

namespace rtgraph {

struct ModelParams {
  double lambda = 1.0;
  double p = 0.5;
  double q = 0.9;

  /// Throws std::invalid_argument unless lambda >= 0 and p, q in [0, 1].
  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Run for `t` further steps.
struct Steps {
  std::uint64_t t = 0;
};
/// Run until the graph first holds `n` users.
struct Nodes {
  std::uint64_t n = 1;
};
using StopCondition = std::variant<Steps, Nodes>;

struct SimulationOptions {
  StateOptions state;
  /// Progression cadence; 0 keeps only the final row.
  std::uint64_t checkpoint_every = 1;
  bool record_events = true;
};

struct SimulationTrace {
  ModelParams params;
  std::uint64_t seed = 0;
  StopCondition stop;
  std::vector<ArrivalEvent> events;  // from t = 0, seed-graph events included
  std::uint64_t seed_event_count = 0;
  GrowthState state;
  ProgressionStats progression;
  bool stop_met = false;
  std::optional<std::uint64_t> tau_n;
};

ArrivalType sample_arrival_type(const ModelParams& params, Rng& rng);

/// Arrival type conditioned on being feasible: with fewer than two users no
/// T3 can be placed, so the draw is from {T1, T2} with weights lambda, p.
ArrivalType sample_feasible_arrival_type(const ModelParams& params, std::uint64_t node_count, Rng& rng);

/// Tree i with probability |T_i| / sum_j |T_j|.
TreeId select_message_tree(const MessageForest& forest, Rng& rng);

/// Root with probability q; otherwise a non-root member w with probability
/// (children(w)+1) / sum(children+1). A root-only tree always yields the root.
UserId select_source_in_tree(const MessageTree& tree, double q, Rng& rng);

/// Uniform over all users except `source`; needs at least two users.
UserId select_t3_target(const RetweetGraph& graph, UserId source, Rng& rng);

/// Samples one event for `state`, applies it and returns it. An empty state
/// receives the initial T1.
ArrivalEvent step(GrowthState& state, const ModelParams& params, Rng& rng);

/// Runs the process from an empty graph or from `seed_events`.
SimulationTrace simulate(const ModelParams& params, StopCondition stop, std::uint64_t seed,
                         const SimulationOptions& options = {},
                         std::span<const ArrivalEvent> seed_events = {});

/// Continues the process from a copy of `start`. The trace's event log holds
/// only the events sampled here (seed_event_count = 0).
SimulationTrace simulate_from(const GrowthState& start, const ModelParams& params, StopCondition stop,
                              std::uint64_t seed, const SimulationOptions& options = {});

}  // namespace rtgraph
