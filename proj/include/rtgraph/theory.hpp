#pragma once

// Closed forms for the growth process and the one-step component-size law.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace rtgraph {

/// E[|E|/|V|] at the time the n-th user arrives: 1/(lambda+p) - 1/(n(lambda+p)).
double expected_edge_density(double lambda, double p, std::uint64_t n);

/// Var[|E|/|V|] at the same stopping time: (n-1)(lambda+1-p) / (n^2 (lambda+p)^2).
double variance_edge_density(double lambda, double p, std::uint64_t n);

/// E[|E_t| / |T_t|] = (1 - (1/(lambda+1))^t) / lambda.
double expected_edges_per_tree(double lambda, std::uint64_t t);

/// Large-t variance of |E_t| / |T_t|: (1+lambda)^2 / (lambda^3 t).
double asymptotic_variance_edges_per_tree(double lambda, std::uint64_t t);

/// (lambda^{3/2} sqrt(t) / (lambda+1)) (edges/trees - 1/lambda); tends to N(0,1).
double normalized_ratio_statistic(std::uint64_t edges, std::uint64_t trees, double lambda, std::uint64_t t);

enum class ComponentChange { NewSingleton, Grow, Merge, Unchanged };

template <class Scalar>
struct ComponentTransition {
  ComponentChange change;
  std::size_t first = 0;   // component index for Grow / Merge
  std::size_t second = 0;  // other component for Merge
  Scalar probability;
  std::vector<std::uint64_t> sizes_after;  // sorted descending
};

template <class Scalar>
struct ComponentDistribution {
  std::vector<ComponentTransition<Scalar>> transitions;
  /// Set when |V| = 1 and T3 carries mass: that mass was moved onto T1/T2
  /// as the engine does.
  bool t3_redistributed = false;

  Scalar total() const {
    Scalar sum(0);
    for (const auto& tr : transitions) sum += tr.probability;
    return sum;
  }

  /// Probabilities keyed by the successor size multiset.
  std::map<std::vector<std::uint64_t>, Scalar, std::greater<>> by_multiset() const {
    std::map<std::vector<std::uint64_t>, Scalar, std::greater<>> out;
    for (const auto& tr : transitions) {
      auto [it, fresh] = out.try_emplace(tr.sizes_after, tr.probability);
      if (!fresh) it->second += tr.probability;
    }
    return out;
  }
};

/// Distribution of component sizes one step after a state with the given
/// labeled component sizes. Scalar may be double or an exact rational type.
template <class Scalar>
ComponentDistribution<Scalar> one_step_component_distribution(std::span<const std::uint64_t> sizes,
                                                               std::uint64_t total_nodes, const Scalar& lambda,
                                                               const Scalar& p) {
  std::uint64_t sum = 0;
  for (auto s : sizes) {
    if (s == 0) throw std::invalid_argument("component sizes must be positive");
    sum += s;
  }
  if (sum != total_nodes || total_nodes == 0)
    throw std::invalid_argument("component sizes must sum to total_nodes >= 1");
  if (lambda < Scalar(0) || p < Scalar(0) || p > Scalar(1)) throw std::invalid_argument("invalid lambda or p");

  auto after = [&](auto&& mutate) {
    std::vector<std::uint64_t> v(sizes.begin(), sizes.end());
    mutate(v);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  };

  ComponentDistribution<Scalar> dist;
  const Scalar one(1);
  const Scalar V(total_nodes);
  Scalar t1 = lambda / (lambda + one);
  Scalar t2 = p / (lambda + one);
  Scalar t3 = (one - p) / (lambda + one);
  if (total_nodes == 1) {
    if (t3 != Scalar(0)) {
      if (!(lambda + p > Scalar(0))) throw std::invalid_argument("no feasible arrival when lambda = p = 0 on one node");
      dist.t3_redistributed = true;
      t1 = lambda / (lambda + p);
      t2 = p / (lambda + p);
    }
    t3 = Scalar(0);
  }

  dist.transitions.push_back({ComponentChange::NewSingleton, 0, 0, t1, after([](auto& v) { v.push_back(1); })});
  for (std::size_t i = 0; i < sizes.size(); ++i)
    dist.transitions.push_back(
        {ComponentChange::Grow, i, 0, t2 * Scalar(sizes[i]) / V, after([i](auto& v) { ++v[i]; })});
  if (total_nodes == 1) return dist;

  const Scalar pairs = V * V - V;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (std::size_t j = i + 1; j < sizes.size(); ++j)
      dist.transitions.push_back({ComponentChange::Merge, i, j,
                                  t3 * Scalar(2) * Scalar(sizes[i]) * Scalar(sizes[j]) / pairs,
                                  after([i, j](auto& v) {
                                    v[i] += v[j];
                                    v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
                                  })});
  Scalar inside(0);
  for (auto s : sizes) inside += Scalar(s) * Scalar(s) - Scalar(s);
  dist.transitions.push_back({ComponentChange::Unchanged, 0, 0, t3 * inside / pairs, after([](auto&) {})});
  return dist;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean, unbiased variance and sqrt(var/n). Needs at least two values.
Moments empirical_moments(std::span<const double> values);

template <class Item, class Selector>
Moments empirical_moments(std::span<const Item> items, Selector&& metric) {
  std::vector<double> values;
  values.reserve(items.size());
  for (const Item& item : items) values.push_back(static_cast<double>(metric(item)));
  return empirical_moments(std::span<const double>(values));
}

}  // namespace rtgraph
