#include "rtgraph/progression.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rtgraph {

LccStats lcc_stats(const ComponentPartition& partition) {
  const auto lcc = partition.largest();
  if (!lcc) throw std::invalid_argument("lcc_stats: empty partition");
  return {lcc->nodes, lcc->edges};
}

ProgressionRow ProgressionRow::capture(const GrowthState& state) {
  const RetweetGraph& g = state.graph();
  const LccStats lcc = lcc_stats(state.partition());
  return {state.t(), g.node_count(), g.edge_count(), state.forest().tree_count(), lcc.nodes, lcc.edges};
}

void ProgressionRecorder::observe(const GrowthState& state) {
  if (every_ != 0 && state.t() % every_ == 0) stats_.rows.push_back(ProgressionRow::capture(state));
}

void ProgressionRecorder::finish(const GrowthState& state) {
  if (!state.initialized()) return;
  if (stats_.rows.empty() || stats_.rows.back().t != state.t())
    stats_.rows.push_back(ProgressionRow::capture(state));
}

std::optional<std::uint64_t> densification_time(const ProgressionStats& progression) {
  for (const ProgressionRow& row : progression.rows)
    if (row.lcc_densified()) return row.t;
  return std::nullopt;
}

void write_progression_csv(std::ostream& out, const ProgressionStats& progression) {
  out << "t,V,E,T,V_lcc,E_lcc,edge_density,lcc_density,lcc_fraction\n";
  char buf[96];
  for (const ProgressionRow& r : progression.rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", r.edge_density(), r.lcc_density(), r.lcc_fraction());
    out << r.t << ',' << r.nodes << ',' << r.edges << ',' << r.trees << ',' << r.lcc_nodes << ','
        << r.lcc_edges << ',' << buf << '\n';
  }
}

ProgressionStats replay_progression(std::span<const ArrivalEvent> events, StateOptions options,
                                    std::uint64_t every) {
  GrowthState state(options);
  ProgressionRecorder recorder(every);
  for (const ArrivalEvent& e : events) {
    state.apply(e);
    recorder.observe(state);
  }
  recorder.finish(state);
  return recorder.take();
}

}  // namespace rtgraph
