#include "rtgraph/theory.hpp"

#include <cmath>

namespace rtgraph {
namespace {

void require_density_args(double lambda, double p, std::uint64_t n) {
  if (!(lambda + p > 0.0)) throw std::domain_error("edge density undefined for lambda + p = 0");
  if (n == 0) throw std::domain_error("n must be >= 1");
}

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
}

}  // namespace

double expected_edge_density(double lambda, double p, std::uint64_t n) {
  require_density_args(lambda, p, n);
  const double s = lambda + p;
  return 1.0 / s - 1.0 / (static_cast<double>(n) * s);
}

double variance_edge_density(double lambda, double p, std::uint64_t n) {
  require_density_args(lambda, p, n);
  const double nn = static_cast<double>(n);
  const double s = lambda + p;
  return (nn - 1.0) * (lambda + 1.0 - p) / (nn * nn * s * s);
}

double expected_edges_per_tree(double lambda, std::uint64_t t) {
  require_positive_lambda(lambda);
  return (1.0 - std::pow(1.0 / (lambda + 1.0), static_cast<double>(t))) / lambda;
}

double asymptotic_variance_edges_per_tree(double lambda, std::uint64_t t) {
  require_positive_lambda(lambda);
  if (t == 0) throw std::domain_error("t must be >= 1");
  return (1.0 + lambda) * (1.0 + lambda) / (lambda * lambda * lambda * static_cast<double>(t));
}

double normalized_ratio_statistic(std::uint64_t edges, std::uint64_t trees, double lambda, std::uint64_t t) {
  require_positive_lambda(lambda);
  if (trees == 0) throw std::domain_error("normalized ratio undefined without trees");
  if (t == 0) throw std::domain_error("t must be >= 1");
  const double scale = std::pow(lambda, 1.5) * std::sqrt(static_cast<double>(t)) / (lambda + 1.0);
  return scale * (static_cast<double>(edges) / static_cast<double>(trees) - 1.0 / lambda);
}

Moments empirical_moments(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("empirical_moments needs at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  return {mean, var, std::sqrt(var / n), values.size()};
}

}  // namespace rtgraph
