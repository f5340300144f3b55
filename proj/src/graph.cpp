#include "rtgraph/graph.hpp"

#include <algorithm>
#include <tuple>

namespace rtgraph {

std::string_view to_string(ArrivalType type) {
  switch (type) {
    case ArrivalType::T1: return "T1";
    case ArrivalType::T2: return "T2";
    case ArrivalType::T3: return "T3";
  }
  return "?";
}

ArrivalType arrival_type_from_string(std::string_view text) {
  if (text == "T1") return ArrivalType::T1;
  if (text == "T2") return ArrivalType::T2;
  if (text == "T3") return ArrivalType::T3;
  throw EventError("unknown arrival type '" + std::string(text) + "'");
}

// ---------------------------------------------------------------- forest

std::span<const MessageForest::Membership> MessageForest::memberships(UserId user) const {
  if (user >= by_user_.size()) return {};
  return by_user_[user];
}

std::optional<std::uint32_t> MessageForest::position_in(UserId user, TreeId tree) const {
  for (const Membership& m : memberships(user))
    if (m.tree == tree) return m.position;
  return std::nullopt;
}

std::optional<TreeId> MessageForest::rooted_tree(UserId user) const {
  for (const Membership& m : memberships(user))
    if (m.position == 0) return m.tree;
  return std::nullopt;
}

TreeId MessageForest::open_tree(UserId root) {
  const auto id = static_cast<TreeId>(trees_.size());
  MessageTree& tree = trees_.emplace_back();
  tree.members_.push_back(root);
  tree.parents_.push_back(root);
  tree.children_.push_back(0);
  tree.nonroot_weights_.push_back(0);
  if (by_user_.size() <= root) by_user_.resize(root + 1);
  by_user_[root].push_back({id, 0});
  size_weights_.push_back(1);
  return id;
}

bool MessageForest::attach(TreeId id, std::uint32_t parent_position, UserId child, bool add_member) {
  MessageTree& tree = trees_[id];
  ++tree.children_[parent_position];
  if (parent_position != 0) tree.nonroot_weights_.add(parent_position, 1);
  if (!add_member || position_in(child, id)) return false;

  const auto position = static_cast<std::uint32_t>(tree.members_.size());
  tree.members_.push_back(child);
  tree.parents_.push_back(tree.members_[parent_position]);
  tree.children_.push_back(0);
  tree.nonroot_weights_.push_back(1);
  if (by_user_.size() <= child) by_user_.resize(child + 1);
  by_user_[child].push_back({id, position});
  size_weights_.add(id, 1);
  return true;
}

// ------------------------------------------------------------- partition

UserId ComponentPartition::find(UserId user) const {
  while (parent_.at(user) != user) user = parent_[user];
  return user;
}

ComponentInfo ComponentPartition::info_at_root(UserId root) const {
  return {min_user_[root], nodes_[root], edges_[root]};
}

ComponentInfo ComponentPartition::component_of(UserId user) const { return info_at_root(find(user)); }

std::vector<ComponentInfo> ComponentPartition::components() const {
  std::vector<ComponentInfo> out;
  out.reserve(components_);
  for (UserId u = 0; u < parent_.size(); ++u)
    if (parent_[u] == u) out.push_back(info_at_root(u));
  std::sort(out.begin(), out.end(),
            [](const ComponentInfo& a, const ComponentInfo& b) { return a.representative < b.representative; });
  return out;
}

std::optional<ComponentInfo> ComponentPartition::largest() const {
  if (!largest_root_) return std::nullopt;
  return info_at_root(*largest_root_);
}

bool larger_component(const ComponentInfo& a, const ComponentInfo& b) {
  return std::tuple(a.nodes, a.edges, b.representative) > std::tuple(b.nodes, b.edges, a.representative);
}

void ComponentPartition::add_user() {
  const auto u = static_cast<UserId>(parent_.size());
  parent_.push_back(u);
  nodes_.push_back(1);
  edges_.push_back(0);
  min_user_.push_back(u);
  ++components_;
  consider_for_largest(u);
}

void ComponentPartition::add_edge(UserId a, UserId b) {
  // path halving while searching
  auto find_mut = [this](UserId u) {
    while (parent_[u] != u) {
      parent_[u] = parent_[parent_[u]];
      u = parent_[u];
    }
    return u;
  };
  UserId ra = find_mut(a);
  UserId rb = find_mut(b);
  if (ra != rb) {
    if (nodes_[ra] < nodes_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    nodes_[ra] += nodes_[rb];
    edges_[ra] += edges_[rb];
    min_user_[ra] = std::min(min_user_[ra], min_user_[rb]);
    --components_;
    if (largest_root_ == rb) largest_root_ = ra;
  }
  ++edges_[ra];
  consider_for_largest(ra);
}

// Components only grow, so comparing the touched component against the
// current largest keeps the maximum exact.
void ComponentPartition::consider_for_largest(UserId root) {
  if (!largest_root_ || larger_component(info_at_root(root), info_at_root(*largest_root_)))
    largest_root_ = root;
}

// ----------------------------------------------------------------- state

GrowthState GrowthState::from_events(std::span<const ArrivalEvent> events, StateOptions options) {
  GrowthState state(options);
  for (const ArrivalEvent& e : events) state.apply(e);
  return state;
}

void GrowthState::validate(const ArrivalEvent& e) const {
  const auto n = graph_.node_count();
  const auto user = [](UserId u) { return "user " + std::to_string(u); };
  switch (e.type) {
    case ArrivalType::T1:
      if (e.source != n) throw EventError("T1 must introduce the next user id " + std::to_string(n) + ", got " + user(e.source));
      if (e.tree != forest_.tree_count())
        throw EventError("T1 must open tree " + std::to_string(forest_.tree_count()) + ", got " + std::to_string(e.tree));
      return;
    case ArrivalType::T2:
      if (n == 0) throw EventError("T2 on an empty graph");
      if (e.target != n) throw EventError("T2 must introduce the next user id " + std::to_string(n) + ", got " + user(e.target));
      break;
    case ArrivalType::T3:
      if (!graph_.contains(e.target)) throw EventError("T3 target " + user(e.target) + " does not exist");
      if (e.source == e.target) throw EventError("T3 self-loop on " + user(e.source));
      break;
  }
  if (!graph_.contains(e.source)) throw EventError("source " + user(e.source) + " does not exist");
  if (e.tree >= forest_.tree_count()) throw EventError("tree " + std::to_string(e.tree) + " does not exist");
  if (!forest_.position_in(e.source, e.tree))
    throw EventError("source " + user(e.source) + " is not a member of tree " + std::to_string(e.tree));
}

UserId GrowthState::add_node(ArrivalType type) {
  const auto u = static_cast<UserId>(graph_.nodes_.size());
  graph_.nodes_.push_back({u, graph_.counters_.events(), type});
  graph_.out_degree_.push_back(0);
  graph_.in_degree_.push_back(0);
  partition_.add_user();
  return u;
}

void GrowthState::apply(const ArrivalEvent& e) {
  validate(e);
  switch (e.type) {
    case ArrivalType::T1: {
      add_node(ArrivalType::T1);
      forest_.open_tree(e.source);
      ++graph_.counters_.t1;
      return;
    }
    case ArrivalType::T2:
      add_node(ArrivalType::T2);
      ++graph_.counters_.t2;
      break;
    case ArrivalType::T3:
      ++graph_.counters_.t3;
      break;
  }
  graph_.edges_.push_back({e.source, e.target, graph_.counters_.events() - 1});
  ++graph_.out_degree_[e.source];
  ++graph_.in_degree_[e.target];
  partition_.add_edge(e.source, e.target);
  const bool add_member = e.type == ArrivalType::T2 || options_.trees_grow_on_t3;
  forest_.attach(e.tree, *forest_.position_in(e.source, e.tree), e.target, add_member);
}

DegreeHistogram degree_distribution(const RetweetGraph& graph) {
  DegreeHistogram h;
  auto bump = [](std::vector<std::uint64_t>& counts, std::uint64_t d) {
    if (counts.size() <= d) counts.resize(d + 1, 0);
    ++counts[d];
  };
  for (const NodeRecord& node : graph.nodes()) {
    bump(h.in, graph.in_degree(node.user));
    bump(h.out, graph.out_degree(node.user));
  }
  return h;
}

}  // namespace rtgraph
