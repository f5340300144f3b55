#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rtgraph/random.hpp"

namespace rtgraph {

/// Dynamic discrete distribution over integer weights, stored as a Fenwick
/// tree. Sampling draws an exact uniform integer in [0, total) and descends
/// the tree, so selection probabilities are exactly weight / total.
class WeightedIndex {
 public:
  std::size_t size() const { return tree_.size(); }
  bool empty() const { return tree_.empty(); }
  std::uint64_t total() const { return total_; }

  void push_back(std::uint64_t weight) {
    const std::size_t i = tree_.size() + 1;  // 1-based slot of the new entry
    const std::size_t low = i - (i & (~i + 1));
    tree_.push_back(weight + prefix(i - 1) - prefix(low));
    total_ += weight;
  }

  void add(std::size_t index, std::uint64_t delta) {
    if (index >= tree_.size()) throw std::out_of_range("WeightedIndex::add");
    for (std::size_t i = index + 1; i <= tree_.size(); i += i & (~i + 1)) tree_[i - 1] += delta;
    total_ += delta;
  }

  std::uint64_t weight(std::size_t index) const { return prefix(index + 1) - prefix(index); }

  /// Sum of weights of entries [0, count).
  std::uint64_t prefix(std::size_t count) const {
    std::uint64_t sum = 0;
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) sum += tree_[i - 1];
    return sum;
  }

  /// Entry whose cumulative range contains `target` (target < total()).
  std::size_t find(std::uint64_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(tree_.size()); step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= tree_.size() && tree_[next - 1] <= target) {
        pos = next;
        target -= tree_[next - 1];
      }
    }
    return pos;
  }

  std::size_t sample(Rng& rng) const {
    if (total_ == 0) throw std::logic_error("WeightedIndex::sample: zero total weight");
    return find(rng.uniform_index(total_));
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::uint64_t total_ = 0;
};

}  // namespace rtgraph
