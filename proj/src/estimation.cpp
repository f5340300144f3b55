#include "rtgraph/estimation.hpp"

#include <cstdio>
#include <ostream>

namespace rtgraph {

std::optional<double> estimate_lambda(std::uint64_t trees, std::uint64_t edges) {
  if (edges == 0) return std::nullopt;
  return static_cast<double>(trees) / static_cast<double>(edges);
}

std::optional<PEstimate> estimate_p(std::uint64_t nodes, std::uint64_t trees, std::uint64_t edges) {
  if (edges == 0) return std::nullopt;
  const double numerator = static_cast<double>(nodes) - static_cast<double>(trees) - 1.0;
  const double value = numerator / static_cast<double>(edges);
  return PEstimate{value, value < 0.0 || value > 1.0};
}

EstimateSeries estimate_series(const ProgressionStats& progression) {
  EstimateSeries series;
  series.rows.reserve(progression.rows.size());
  for (const ProgressionRow& r : progression.rows)
    series.rows.push_back({r.t, estimate_lambda(r.trees, r.edges), estimate_p(r.nodes, r.trees, r.edges)});
  return series;
}

void write_estimates_csv(std::ostream& out, const EstimateSeries& series) {
  out << "t,lambda_hat,p_hat,defined\n";
  char buf[64];
  for (const EstimateRow& r : series.rows) {
    out << r.t << ',';
    if (r.defined()) {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,1", *r.lambda_hat, r.p_hat->value);
      out << buf << '\n';
    } else {
      out << ",,0\n";
    }
  }
}

}  // namespace rtgraph
