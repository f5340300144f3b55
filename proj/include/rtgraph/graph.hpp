#pragma once

// Retweet multigraph, message forest and incremental weak components.
//
// Users are dense integer ids assigned in arrival order. An edge (u, v) means
// v retweeted u. All mutation goes through GrowthState::apply so the three
// structures never disagree.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtgraph/weighted_index.hpp"

namespace rtgraph {

using UserId = std::uint32_t;
using TreeId = std::uint32_t;

enum class ArrivalType : std::uint8_t { T1, T2, T3 };

std::string_view to_string(ArrivalType type);
ArrivalType arrival_type_from_string(std::string_view text);

/// One arrival. For T1 `source` is the new user and `tree` the tree it
/// opens; for T2 `target` is the new user; for T3 both endpoints exist.
struct ArrivalEvent {
  ArrivalType type = ArrivalType::T1;
  UserId source = 0;
  UserId target = 0;
  TreeId tree = 0;

  static ArrivalEvent t1(UserId user, TreeId tree) { return {ArrivalType::T1, user, 0, tree}; }
  static ArrivalEvent t2(UserId source, UserId new_user, TreeId tree) {
    return {ArrivalType::T2, source, new_user, tree};
  }
  static ArrivalEvent t3(UserId source, UserId target, TreeId tree) {
    return {ArrivalType::T3, source, target, tree};
  }

  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

class EventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArrivalCounters {
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  std::uint64_t t3 = 0;

  std::uint64_t events() const { return t1 + t2 + t3; }
  /// Time index of the latest event; the initial node is the T1 at t = 0.
  std::uint64_t t() const { return events() == 0 ? 0 : events() - 1; }

  friend bool operator==(const ArrivalCounters&, const ArrivalCounters&) = default;
};

struct NodeRecord {
  UserId user;
  std::uint64_t arrival;
  ArrivalType type;
};

struct EdgeRecord {
  UserId source;
  UserId target;
  std::uint64_t arrival;
};

class GrowthState;

class RetweetGraph {
 public:
  std::uint64_t node_count() const { return nodes_.size(); }
  std::uint64_t edge_count() const { return edges_.size(); }
  const ArrivalCounters& counters() const { return counters_; }
  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const EdgeRecord> edges() const { return edges_; }
  bool contains(UserId user) const { return user < nodes_.size(); }
  std::uint64_t out_degree(UserId user) const { return out_degree_.at(user); }
  std::uint64_t in_degree(UserId user) const { return in_degree_.at(user); }

 private:
  friend class GrowthState;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::uint64_t> out_degree_;
  std::vector<std::uint64_t> in_degree_;
  ArrivalCounters counters_;
};

/// One message tree: the T1 originator plus the users attached to it.
/// Position 0 is always the root. `nonroot_weights` holds children + 1 per
/// non-root member (weight 0 at the root's slot) for superstar sampling.
class MessageTree {
 public:
  UserId root() const { return members_.front(); }
  std::uint64_t size() const { return members_.size(); }
  std::span<const UserId> members() const { return members_; }
  UserId member(std::size_t position) const { return members_.at(position); }
  UserId parent(std::size_t position) const { return parents_.at(position); }
  std::uint64_t children(std::size_t position) const { return children_.at(position); }
  const WeightedIndex& nonroot_weights() const { return nonroot_weights_; }
  bool has_nonroot_members() const { return members_.size() > 1; }

 private:
  friend class MessageForest;
  std::vector<UserId> members_;
  std::vector<UserId> parents_;
  std::vector<std::uint64_t> children_;
  WeightedIndex nonroot_weights_;
};

class MessageForest {
 public:
  struct Membership {
    TreeId tree;
    std::uint32_t position;
  };

  std::uint64_t tree_count() const { return trees_.size(); }
  const MessageTree& tree(TreeId id) const { return trees_.at(id); }
  std::span<const MessageTree> trees() const { return trees_; }
  /// Tree sizes as a sampling structure; total() is the sum of tree sizes.
  const WeightedIndex& size_weights() const { return size_weights_; }
  std::span<const Membership> memberships(UserId user) const;
  std::optional<std::uint32_t> position_in(UserId user, TreeId tree) const;
  /// Tree rooted at `user`, if the user is a T1 originator.
  std::optional<TreeId> rooted_tree(UserId user) const;

 private:
  friend class GrowthState;
  TreeId open_tree(UserId root);
  // Attaches `child` under the member at `parent_position`; returns false if
  // the child already belonged to the tree (only the child count changes).
  bool attach(TreeId tree, std::uint32_t parent_position, UserId child, bool add_member);

  std::vector<MessageTree> trees_;
  std::vector<std::vector<Membership>> by_user_;
  WeightedIndex size_weights_;
};

struct ComponentInfo {
  UserId representative;  // smallest user id in the component
  std::uint64_t nodes;
  std::uint64_t edges;
};

/// Union-find over users with node/edge aggregates per component and an
/// incrementally maintained largest component.
class ComponentPartition {
 public:
  std::uint64_t component_count() const { return components_; }
  std::uint64_t user_count() const { return parent_.size(); }
  UserId find(UserId user) const;
  bool connected(UserId a, UserId b) const { return find(a) == find(b); }
  ComponentInfo component_of(UserId user) const;
  /// All components ordered by representative.
  std::vector<ComponentInfo> components() const;
  /// Largest component: most nodes, then most edges, then smallest
  /// representative. Empty partition yields nullopt.
  std::optional<ComponentInfo> largest() const;

 private:
  friend class GrowthState;
  void add_user();
  void add_edge(UserId a, UserId b);
  void consider_for_largest(UserId root);
  ComponentInfo info_at_root(UserId root) const;

  std::vector<UserId> parent_;
  std::vector<std::uint64_t> nodes_;
  std::vector<std::uint64_t> edges_;
  std::vector<UserId> min_user_;
  std::uint64_t components_ = 0;
  std::optional<UserId> largest_root_;
};

/// Strict-weak "larger component" order used for the LCC.
bool larger_component(const ComponentInfo& a, const ComponentInfo& b);

struct StateOptions {
  /// Whether a T3 retweeter joins the message tree it retweeted into.
  bool trees_grow_on_t3 = true;
};

/// Graph, forest and partition evolving together under arrival events.
class GrowthState {
 public:
  GrowthState() = default;
  explicit GrowthState(StateOptions options) : options_(options) {}

  static GrowthState from_events(std::span<const ArrivalEvent> events, StateOptions options = {});

  /// Validates and applies one event; throws EventError on rejection,
  /// leaving the state unchanged.
  void apply(const ArrivalEvent& event);

  bool initialized() const { return graph_.node_count() > 0; }
  std::uint64_t t() const { return graph_.counters().t(); }
  const RetweetGraph& graph() const { return graph_; }
  const MessageForest& forest() const { return forest_; }
  const ComponentPartition& partition() const { return partition_; }
  const StateOptions& options() const { return options_; }

 private:
  void validate(const ArrivalEvent& event) const;
  UserId add_node(ArrivalType type);

  StateOptions options_;
  RetweetGraph graph_;
  MessageForest forest_;
  ComponentPartition partition_;
};

inline void apply_event(GrowthState& state, const ArrivalEvent& event) { state.apply(event); }

struct DegreeHistogram {
  // counts[d] = number of users with that degree
  std::vector<std::uint64_t> in;
  std::vector<std::uint64_t> out;
};

DegreeHistogram degree_distribution(const RetweetGraph& graph);

}  // namespace rtgraph
