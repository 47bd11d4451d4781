#pragma once

// Brute-force references for the test suite and the `verify` subcommand.
// None of these share numerical code with the routines they check, apart
// from the normal CDF.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ascifit/estimator.hpp"
#include "ascifit/folded_normal.hpp"

namespace ascifit::oracle {

struct GridScanSpec {
  double lo = 0.0;
  double hi = 1.0;
  double step = 1e-3;

  void validate() const;
  std::size_t points() const;
};

/// Grid point sigma minimizing |G(sigma) - target|. Ties go to the smaller
/// sigma.
double root_scan(double target, std::span<const double> t_hat, const EstimatorConfig& cfg, const GridScanSpec& spec);

struct McMoments {
  double mean = 0.0;
  double variance = 0.0;
  double square_variance = 0.0;  // Var(T^2)
  // Standard errors of the three estimates, from the sample's own moments.
  double mean_se = 0.0;
  double variance_se = 0.0;
  double square_variance_se = 0.0;
};

/// Sample moments of |N(mu, sigma^2)| over `draws` draws (draws >= 10^4).
McMoments mc_folded_moments(FoldedParams p, std::size_t draws, std::uint64_t seed);

/// Exact projection onto {floor <= x_1 <= ... <= x_n} by enumerating every
/// contiguous block partition with levels max(block mean, floor). n <= 10.
std::vector<double> projection_qp_oracle(std::span<const double> y, double floor);

inline constexpr std::size_t kMaxQpOracleSize = 10;

}  // namespace ascifit::oracle

namespace ascifit::oracle {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 0;
};

/// Oracle-equivalence checks behind `ascifit verify`: PAVA vs max-min, the
/// floored projection vs enumeration, solve_sigma vs root_scan, and the folded
/// moments vs Monte Carlo. `quick` shrinks trial counts for CI smoke runs.
std::vector<CheckOutcome> run_equivalence_suite(std::uint64_t seed, bool quick = false);

}  // namespace ascifit::oracle
