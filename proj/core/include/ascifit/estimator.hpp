#pragma once

// The three-step fit for sign-corrupted isotonic data:
//   I.   t = |r|, t_hat = PAVA(t)
//   II.  sigma_hat solves G(sigma) = mean(t^2) by bisection
//   III. mu_hat_i = f^-1(max(t_hat_i, f(eta, sigma_hat)), sigma_hat)

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ascifit/folded_normal.hpp"

namespace ascifit {

struct EstimatorConfig {
  double eta = 0.0;                            // known floor of the signal, must be > 0
  double sigma_bracket_floor = 0.0;            // psi
  std::optional<double> sigma_bracket_ceiling;  // Psi
  double root_tol = 1e-9;
  int root_max_iters = 200;
  EvalAccuracy accuracy;

  void validate() const;
};

struct RootDiagnostics {
  double g_at_zero = 0.0;
  double g_at_ceiling = 0.0;
  int iterations = 0;
  bool bracket_valid = false;
  bool converged = false;
  bool clamped = false;  // result moved into [psi, Psi]
  double residual = 0.0;  // |G(sigma_hat) - mean(t^2)|
};

struct SigmaSolution {
  double sigma = 0.0;
  RootDiagnostics diagnostics;
};

struct FitResult {
  std::vector<double> t;
  std::vector<double> t_hat;
  double sigma_hat = 0.0;
  std::vector<double> mu_hat;
  std::vector<double> mu_naive;
  RootDiagnostics diagnostics;
};

struct RateBoundConfig {
  double c2 = 1.0;
  double delta = 20.0;
  double gamma = 10.0;

  void validate() const;
};

/// Elementwise |r|.
std::vector<double> preprocess(std::span<const double> r);

/// G(sigma) = sigma^2 + mean_i f^-1(max(t_hat_i, f(eta, sigma)), sigma)^2.
/// t_hat must be non-decreasing; runs of equal values are inverted once.
double big_g(double sigma, std::span<const double> t_hat, const EstimatorConfig& cfg);

/// Root of G(sigma) = mean(t^2) on [0, sqrt(mean(t^2))].
///
/// When the bracket does not straddle the target the nearer endpoint is
/// returned with bracket_valid = false. Never throws on non-convergence; the
/// best iterate comes back with converged = false.
SigmaSolution solve_sigma(std::span<const double> t, std::span<const double> t_hat,
                          const EstimatorConfig& cfg);

/// Full pipeline on raw responses r.
FitResult fit(std::span<const double> r, const EstimatorConfig& cfg);

/// min[2 sigma^2 C^2, (27/4) ((mu_n - mu_1)/n)^(2/3) (sigma C)^(4/3)
///                    + 2 sigma^2 C^2 (1 + log n) / n]
double rate_bound_r_n2(std::size_t n, double mu_first, double mu_last, double sigma,
                       const RateBoundConfig& rb = {});

/// delta * r_{n,2} + gamma^2 / n: the MSE envelope that holds with
/// probability at least 1 - 1/delta - 2/gamma^2.
double rate_envelope(std::size_t n, double mu_first, double mu_last, double sigma,
                     const RateBoundConfig& rb = {});

/// (1/n) ||a - b||^2.
double mean_squared_error(std::span<const double> a, std::span<const double> b);

}  // namespace ascifit
