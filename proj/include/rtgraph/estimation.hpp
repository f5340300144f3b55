#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rtgraph/progression.hpp"

namespace rtgraph {

/// lambda_hat = |T| / |E|; nullopt when there are no edges.
std::optional<double> estimate_lambda(std::uint64_t trees, std::uint64_t edges);

struct PEstimate {
  double value = 0.0;
  bool out_of_range = false;  // value outside [0, 1]; reported unclamped
};

/// p_hat = (|V| - |T| - 1) / |E|; nullopt when there are no edges.
std::optional<PEstimate> estimate_p(std::uint64_t nodes, std::uint64_t trees, std::uint64_t edges);

struct EstimateRow {
  std::uint64_t t = 0;
  std::optional<double> lambda_hat;
  std::optional<PEstimate> p_hat;
  bool defined() const { return lambda_hat.has_value(); }
};

struct EstimateSeries {
  std::vector<EstimateRow> rows;
};

EstimateSeries estimate_series(const ProgressionStats& progression);

/// CSV `t,lambda_hat,p_hat,defined`; undefined estimates leave empty fields.
void write_estimates_csv(std::ostream& out, const EstimateSeries& series);

}  // namespace rtgraph
