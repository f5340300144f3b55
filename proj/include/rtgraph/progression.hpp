#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rtgraph/graph.hpp"

namespace rtgraph {

struct LccStats {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  double density() const { return nodes == 0 ? 0.0 : static_cast<double>(edges) / static_cast<double>(nodes); }
};

/// Counts of the largest weakly connected component (see larger_component
/// for the tie-break). Throws std::invalid_argument on an empty partition.
LccStats lcc_stats(const ComponentPartition& partition);

/// One checkpoint. Ratios are derived from the integer counts on demand.
struct ProgressionRow {
  std::uint64_t t = 0;
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t trees = 0;
  std::uint64_t lcc_nodes = 0;
  std::uint64_t lcc_edges = 0;

  double edge_density() const { return ratio(edges, nodes); }
  double lcc_density() const { return ratio(lcc_edges, lcc_nodes); }
  double lcc_fraction() const { return ratio(lcc_nodes, nodes); }
  /// |E_LCC| / |V_LCC| > 1, compared exactly on the counts.
  bool lcc_densified() const { return lcc_edges > lcc_nodes; }

  static ProgressionRow capture(const GrowthState& state);
  friend bool operator==(const ProgressionRow&, const ProgressionRow&) = default;

 private:
  static double ratio(std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  }
};

struct ProgressionStats {
  std::vector<ProgressionRow> rows;
  friend bool operator==(const ProgressionStats&, const ProgressionStats&) = default;
};

/// Records a row whenever t is a multiple of `every` (every = 0 records only
/// what finish() adds). finish() appends the final state if not yet recorded.
class ProgressionRecorder {
 public:
  explicit ProgressionRecorder(std::uint64_t every = 1) : every_(every) {}

  void observe(const GrowthState& state);
  void finish(const GrowthState& state);
  const ProgressionStats& stats() const { return stats_; }
  ProgressionStats take() { return std::move(stats_); }

 private:
  std::uint64_t every_;
  ProgressionStats stats_;
};

/// First checkpoint step whose LCC edge density strictly exceeds 1.
std::optional<std::uint64_t> densification_time(const ProgressionStats& progression);

/// Row-per-checkpoint CSV with the fixed header
/// t,V,E,T,V_lcc,E_lcc,edge_density,lcc_density,lcc_fraction.
void write_progression_csv(std::ostream& out, const ProgressionStats& progression);

/// Progression over every prefix of an event log.
ProgressionStats replay_progression(std::span<const ArrivalEvent> events, StateOptions options = {},
                                    std::uint64_t every = 1);

}  // namespace rtgraph
