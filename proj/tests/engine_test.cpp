#include "rtgraph/engine.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

namespace rtgraph {
namespace {

// Pearson statistic computed here rather than through the library.
double pearson(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
  double n = 0;
  for (auto o : observed) n += static_cast<double>(o);
  double x2 = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probs[i];
    x2 += (static_cast<double>(observed[i]) - e) * (static_cast<double>(observed[i]) - e) / e;
  }
  return x2;
}

// Upper 0.1% points of chi-square with 1..4 degrees of freedom.
constexpr std::array<double, 5> kChi2Crit999{0.0, 10.828, 13.816, 16.266, 18.467};

GrowthState build(std::vector<ArrivalEvent> events) { return GrowthState::from_events(events); }

TEST(ArrivalType, FrequenciesMatchRates) {
  const ModelParams params{0.5, 0.3, 0.9};
  Rng rng(1);
  std::vector<std::uint64_t> counts(3);
  for (int i = 0; i < 1'000'000; ++i) ++counts[static_cast<int>(sample_arrival_type(params, rng))];
  const double z = 1.5;
  EXPECT_LT(pearson(counts, {0.5 / z, 0.3 / z, 0.7 / z}), kChi2Crit999[2]);
}

TEST(ArrivalType, DegenerateRates) {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_NE(sample_arrival_type({0.0, 0.4, 0.9}, rng), ArrivalType::T1);
    EXPECT_NE(sample_arrival_type({0.8, 1.0, 0.9}, rng), ArrivalType::T3);
  }
}

TEST(ArrivalType, OneNodeConditioning) {
  Rng rng(3);
  std::vector<std::uint64_t> counts(2);
  for (int i = 0; i < 200'000; ++i) {
    const ArrivalType t = sample_feasible_arrival_type({1.0, 0.5, 0.9}, 1, rng);
    ASSERT_NE(t, ArrivalType::T3);
    ++counts[static_cast<int>(t)];
  }
  EXPECT_LT(pearson(counts, {2.0 / 3.0, 1.0 / 3.0}), kChi2Crit999[1]);
  EXPECT_THROW(sample_feasible_arrival_type({0.0, 0.0, 0.9}, 1, rng), std::logic_error);
}

TEST(TreeSelection, ProportionalToSize) {
  // tree 0 has size 1, tree 1 has size 3
  const auto s = build({ArrivalEvent::t1(0, 0), ArrivalEvent::t1(1, 1), ArrivalEvent::t2(1, 2, 1),
                        ArrivalEvent::t2(1, 3, 1)});
  Rng rng(4);
  std::vector<std::uint64_t> counts(2);
  for (int i = 0; i < 200'000; ++i) ++counts[select_message_tree(s.forest(), rng)];
  EXPECT_LT(pearson(counts, {0.25, 0.75}), kChi2Crit999[1]);
}

TEST(SourceSelection, SuperstarWeightsWithoutRootMass) {
  // chain root 0 -> a (1) -> b (2): a has one child so weights are 2 : 1
  const auto s = build({ArrivalEvent::t1(0, 0), ArrivalEvent::t2(0, 1, 0), ArrivalEvent::t2(1, 2, 0)});
  Rng rng(5);
  std::vector<std::uint64_t> counts(3);
  for (int i = 0; i < 150'000; ++i) ++counts[select_source_in_tree(s.forest().tree(0), 0.0, rng)];
  EXPECT_EQ(counts[0], 0u);
  EXPECT_LT(pearson({counts[1], counts[2]}, {2.0 / 3.0, 1.0 / 3.0}), kChi2Crit999[1]);
}

TEST(SourceSelection, RootProbabilityQ) {
  const auto s = build({ArrivalEvent::t1(0, 0), ArrivalEvent::t2(0, 1, 0), ArrivalEvent::t2(1, 2, 0)});
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(select_source_in_tree(s.forest().tree(0), 1.0, rng), 0u);
  // q = 0.4: root 0.4, a 0.6 * 2/3, b 0.6 * 1/3
  std::vector<std::uint64_t> counts(3);
  for (int i = 0; i < 150'000; ++i) ++counts[select_source_in_tree(s.forest().tree(0), 0.4, rng)];
  EXPECT_LT(pearson(counts, {0.4, 0.4, 0.2}), kChi2Crit999[2]);
}

TEST(SourceSelection, RootOnlyTreeYieldsRoot) {
  const auto s = build({ArrivalEvent::t1(0, 0), ArrivalEvent::t1(1, 1)});
  Rng rng(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_source_in_tree(s.forest().tree(1), 0.0, rng), 1u);
}

TEST(TargetSelection, UniformOverOtherUsers) {
  auto s = build({ArrivalEvent::t1(0, 0), ArrivalEvent::t1(1, 1), ArrivalEvent::t1(2, 2), ArrivalEvent::t1(3, 3),
                  ArrivalEvent::t1(4, 4)});
  Rng rng(8);
  std::vector<std::uint64_t> counts(5);
  for (int i = 0; i < 200'000; ++i) ++counts[select_t3_target(s.graph(), 2, rng)];
  EXPECT_EQ(counts[2], 0u);
  EXPECT_LT(pearson({counts[0], counts[1], counts[3], counts[4]}, {0.25, 0.25, 0.25, 0.25}), kChi2Crit999[3]);
  const auto one = build({ArrivalEvent::t1(0, 0)});
  EXPECT_THROW(select_t3_target(one.graph(), 0, rng), std::logic_error);
}

TEST(Simulate, StepsZeroIsTheInitialNode) {
  const auto trace = simulate({}, Steps{0}, 1);
  EXPECT_EQ(trace.events.size(), 1u);
  EXPECT_EQ(trace.events[0], ArrivalEvent::t1(0, 0));
  EXPECT_EQ(trace.state.graph().node_count(), 1u);
  EXPECT_TRUE(trace.stop_met);
}

TEST(Simulate, StepsCountFromStartingState) {
  const auto a = simulate({}, Steps{50}, 1);
  EXPECT_EQ(a.state.t(), 50u);
  EXPECT_EQ(a.events.size(), 51u);
  const auto b = simulate({}, Steps{20}, 2, {}, a.events);
  EXPECT_EQ(b.seed_event_count, 51u);
  EXPECT_EQ(b.state.t(), 70u);
  EXPECT_TRUE(std::equal(a.events.begin(), a.events.end(), b.events.begin()));
  const auto c = simulate_from(a.state, {}, Steps{20}, 2);
  EXPECT_EQ(c.state.t(), 70u);
  EXPECT_EQ(c.events.size(), 20u);
  EXPECT_TRUE(std::equal(c.events.begin(), c.events.end(), b.events.begin() + 51));
}

TEST(Simulate, DeterministicPerSeed) {
  const ModelParams params{0.3, 0.6, 0.7};
  const auto a = simulate(params, Steps{5000}, 42);
  const auto b = simulate(params, Steps{5000}, 42);
  const auto c = simulate(params, Steps{5000}, 43);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.progression, b.progression);
  EXPECT_NE(a.events, c.events);
}

TEST(Simulate, StepFrequenciesWithinThreeSigma) {
  const ModelParams params{0.6, 0.7, 0.9};
  const auto trace = simulate(params, Steps{100'000}, 11);
  std::map<ArrivalType, double> count;
  std::uint64_t n = 0;
  GrowthState replay;
  for (const ArrivalEvent& e : trace.events) {
    const bool counted = replay.graph().node_count() >= 2;
    replay.apply(e);
    if (!counted) continue;
    ++count[e.type];
    ++n;
  }
  const double z = params.lambda + 1;
  const std::map<ArrivalType, double> prob{
      {ArrivalType::T1, params.lambda / z}, {ArrivalType::T2, params.p / z}, {ArrivalType::T3, (1 - params.p) / z}};
  for (const auto& [type, pr] : prob) {
    const double sigma = std::sqrt(static_cast<double>(n) * pr * (1 - pr));
    EXPECT_LT(std::abs(count[type] - static_cast<double>(n) * pr), 3 * sigma) << to_string(type);
  }
}

TEST(Simulate, NodesStopHitsTauN) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto trace = simulate({0.5, 0.5, 0.9}, Nodes{300}, seed);
    ASSERT_TRUE(trace.tau_n.has_value());
    EXPECT_EQ(trace.state.graph().node_count(), 300u);
    EXPECT_EQ(*trace.tau_n, trace.state.t());
    EXPECT_NE(trace.events.back().type, ArrivalType::T3);  // the step that added the n-th user
  }
  const auto one = simulate({}, Nodes{1}, 3);
  EXPECT_EQ(one.tau_n, 0u);
}

TEST(Simulate, NodesStopErrors) {
  EXPECT_THROW(simulate({}, Nodes{0}, 1), std::invalid_argument);
  const auto a = simulate({}, Nodes{40}, 1);
  EXPECT_THROW(simulate_from(a.state, {}, Nodes{10}, 1), std::invalid_argument);
  EXPECT_THROW(simulate({-1.0, 0.5, 0.5}, Steps{1}, 1), std::invalid_argument);
  EXPECT_THROW(simulate({1.0, 1.5, 0.5}, Steps{1}, 1), std::invalid_argument);
}

TEST(Simulate, PEqualOneBuildsForest) {
  const auto trace = simulate({0.3, 1.0, 0.5}, Steps{20'000}, 5);
  const auto& s = trace.state;
  EXPECT_EQ(s.graph().counters().t3, 0u);
  EXPECT_EQ(s.graph().edge_count() + s.forest().tree_count(), s.graph().node_count());
  EXPECT_EQ(s.partition().component_count(), s.forest().tree_count());
  for (const auto& row : trace.progression.rows) ASSERT_LE(row.lcc_edges, row.lcc_nodes);
}

TEST(Simulate, LambdaZeroKeepsOneTree) {
  const auto trace = simulate({0.0, 0.5, 0.5}, Steps{3000}, 6);
  EXPECT_EQ(trace.state.forest().tree_count(), 1u);
  EXPECT_EQ(trace.state.partition().component_count(), 1u);
}

TEST(Simulate, QOneRetweetsOnlyRoots) {
  const auto trace = simulate({0.5, 0.5, 1.0}, Steps{5000}, 7);
  const auto& forest = trace.state.forest();
  for (const ArrivalEvent& e : trace.events)
    if (e.type != ArrivalType::T1) ASSERT_EQ(e.source, forest.tree(e.tree).root());
}

TEST(Simulate, TraceReplayReproducesState) {
  SimulationOptions options;
  options.state.trees_grow_on_t3 = false;
  const auto trace = simulate({0.4, 0.4, 0.6}, Steps{4000}, 8, options);
  const auto rebuilt = GrowthState::from_events(trace.events, options.state);
  EXPECT_EQ(ProgressionRow::capture(rebuilt), ProgressionRow::capture(trace.state));
  for (TreeId t = 0; t < rebuilt.forest().tree_count(); ++t)
    EXPECT_EQ(rebuilt.forest().tree(t).size(), trace.state.forest().tree(t).size());
}

TEST(Simulate, LargeLambdaIsSparse) {
  const auto trace = simulate({1000.0, 0.5, 0.9}, Steps{20'000}, 9);
  const auto row = ProgressionRow::capture(trace.state);
  EXPECT_LT(row.edge_density(), 0.01);
  EXPECT_LT(row.lcc_fraction(), 0.01);
}

TEST(Simulate, FinalStateOnlyOptions) {
  SimulationOptions options;
  options.checkpoint_every = 0;
  options.record_events = false;
  const auto lean = simulate({}, Steps{1000}, 10, options);
  const auto full = simulate({}, Steps{1000}, 10);
  EXPECT_TRUE(lean.events.empty());
  ASSERT_EQ(lean.progression.rows.size(), 1u);
  EXPECT_EQ(lean.progression.rows[0], full.progression.rows.back());
}

}  // namespace
}  // namespace rtgraph
