#pragma once

// Theorem-verification battery. Each check runs a fixed Monte Carlo
// experiment (or an exact evaluation) and reports one record per claim.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rtgraph {

struct ClaimRecord {
  std::string claim;
  double theoretical = 0.0;
  double empirical = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyConfig {
  std::string suite = "full";  // "full" or "quick"
  std::uint64_t base_seed = 20140927;
  std::size_t jobs = 1;
};

// Edge density at tau_n: mean within 3 SE of the closed form, variance in
// the two-sided 99% chi-square band (lambda = p = 0.5, n = 200, 1000 runs).
std::vector<ClaimRecord> check_edge_density_theorem(const VerifyConfig& config);
// |E_t|/|T_t| mean at t = 500 (lambda = 1, 1000 runs).
std::vector<ClaimRecord> check_edges_per_tree_mean(const VerifyConfig& config);
// Scaled variance at t = 2000 in [0.85, 1.15] (lambda = 1, 3000 runs).
std::vector<ClaimRecord> check_edges_per_tree_variance(const VerifyConfig& config);
// KS normality of the normalized ratio at t = 5000 (lambda = 1, 2000 runs).
std::vector<ClaimRecord> check_ratio_clt(const VerifyConfig& config);
// One-step component law on sizes (2, 3): exact rational sum and chi-square
// against 10^5 engine steps.
std::vector<ClaimRecord> check_component_step_law(const VerifyConfig& config);
// lambda_hat / p_hat recovery at t = 20000 over 20 runs.
std::vector<ClaimRecord> check_estimator_recovery(const VerifyConfig& config);
// 1/(lambda+p) approximation over the grid and monotonicity in lambda.
std::vector<ClaimRecord> check_density_approximation(const VerifyConfig& config);
// p = 1 never densifies, q = 1 sources are roots, huge lambda is sparse.
std::vector<ClaimRecord> check_degenerate_cases(const VerifyConfig& config);
// Replay from the densification point brackets the ground truth.
std::vector<ClaimRecord> check_replay_consistency(const VerifyConfig& config);
// Direct evaluations of the closed forms at documented points.
std::vector<ClaimRecord> check_closed_forms(const VerifyConfig& config);

std::vector<ClaimRecord> verify_theorems(const VerifyConfig& config);

/// JSON array of {claim, theoretical, empirical, tolerance, pass, detail}.
void write_verification_report(std::ostream& out, const std::vector<ClaimRecord>& records);

}  // namespace rtgraph
