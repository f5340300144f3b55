#pragma once

#include <cstdint>
#include <span>

namespace rtgraph::stats {

double standard_normal_cdf(double x);

/// sup |F_n(x) - Phi(x)| for the sample against N(0,1).
double ks_statistic_normal(std::span<const double> sample);

/// Asymptotic P(D_n > d) using Stephens' small-sample correction
/// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) d.
double kolmogorov_pvalue(double d, std::size_t n);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Pearson goodness-of-fit of observed counts against cell probabilities
/// (which must sum to 1). Cells with zero probability must have zero count.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

double chi_square_quantile(double probability, double dof);
double chi_square_survival(double statistic, double dof);

/// Linear-interpolation percentile (q in [0,1]) of an unsorted sample.
double percentile(std::span<const double> sample, double q);

}  // namespace rtgraph::stats
