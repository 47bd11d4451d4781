#pragma once

// Moments of the folded normal |X|, X ~ N(mu, sigma^2), and the inverse of its
// mean in mu. These are the scalar kernels of the estimator pipeline.

namespace ascifit {

struct FoldedParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct EvalAccuracy {
  double phi_abs_tol = 1e-12;
  double inverse_rel_tol = 1e-10;
  int max_iters = 200;

  /// Throws Error(InvalidConfig) when any field is non-positive, or when
  /// phi_abs_tol asks for more than the erfc backend delivers.
  void validate() const;
};

// Absolute error of the erf/erfc backend on [-40, 40]; phi_abs_tol below this
// is rejected.
inline constexpr double kPhiBackendAbsError = 1e-15;

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;

/// 2*Phi(x) - 1 evaluated as erf(x/sqrt 2), which keeps full relative
/// accuracy near 0.
double normal_two_sided(double x) noexcept;

/// f(mu, sigma) = E|X|. sigma == 0 gives |mu|.
double folded_mean(FoldedParams p);

/// g(mu, sigma) = Var|X| = mu^2 + sigma^2 - f^2, clamped into [0, sigma^2].
double folded_var(FoldedParams p);

/// Var(|X|^2) = 4 mu^2 sigma^2 + 2 sigma^4.
double folded_square_var(FoldedParams p);

/// d f / d mu = 2 Phi(mu/sigma) - 1. Throws SigmaZero when sigma == 0.
double folded_mean_dmu(FoldedParams p);

/// Solves folded_mean(mu, sigma) = u for mu in [eta, u] by bisection on
/// [max(eta, u - sigma), u].
///
/// Values of u below f(eta, sigma) by at most inverse_rel_tol * max(1, u) are
/// treated as rounding and return eta; anything lower throws OutOfDomain.
/// The returned mu satisfies |f(mu, sigma) - u| <= inverse_rel_tol * max(1, u).
double folded_mean_inverse(double u, double sigma, double eta, const EvalAccuracy& acc = {});

/// M(x) = x phi(x) / (2 Phi(x) - 1) for x > 0, with the limit M(0) = 1/2.
double normal_ratio_m(double x);

/// J(sigma) = sigma * (1/2 - M(eta / sigma)), J(0) = 0. Lower bound on the
/// slope of the second-moment curve.
double j_sigma(double sigma, double eta);

}  // namespace ascifit
