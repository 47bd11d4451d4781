#include "ascifit/folded_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ascifit/error.hpp"

namespace ascifit {
namespace {

constexpr double kSqrt2OverPi = std::numbers::sqrt2 * std::numbers::inv_sqrtpi;  // sqrt(2/pi)

void require_finite(FoldedParams p, const char* where) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.sigma)) {
    throw Error(ErrorCode::NonFinite, std::string(where) + ": mu and sigma must be finite");
  }
  if (p.sigma < 0.0) {
    throw Error(ErrorCode::OutOfDomain, std::string(where) + ": sigma must be >= 0");
  }
}

}  // namespace

void EvalAccuracy::validate() const {
  if (!(phi_abs_tol > 0.0) || !(inverse_rel_tol > 0.0) || max_iters < 1) {
    throw Error(ErrorCode::InvalidConfig, "accuracy settings must be positive");
  }
  if (phi_abs_tol < kPhiBackendAbsError) {
    throw Error(ErrorCode::InvalidConfig, "phi_abs_tol is below the erfc backend accuracy");
  }
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_two_sided(double x) noexcept { return std::erf(x / std::numbers::sqrt2); }

double folded_mean(FoldedParams p) {
  require_finite(p, "folded_mean");
  const double mu = std::abs(p.mu);
  if (p.sigma == 0.0) return mu;
  const double z = mu / p.sigma;
  // |mu| plus a non-negative excess, so f >= |mu| survives rounding.
  const double excess = kSqrt2OverPi * std::exp(-0.5 * z * z) - z * std::erfc(z / std::numbers::sqrt2);
  return mu + p.sigma * std::max(excess, 0.0);
}

double folded_var(FoldedParams p) {
  require_finite(p, "folded_var");
  if (p.sigma == 0.0) return 0.0;
  const double mu = std::abs(p.mu);
  const double s = p.sigma;
  const double z = mu / s;
  // Expand mu^2 + s^2 - f^2 with 1 - erf^2 = erfc (2 - erfc) so that the
  // large-z regime does not cancel mu^2 against f^2.
  const double erfc_z = std::erfc(z / std::numbers::sqrt2);
  const double erf_z = 1.0 - erfc_z;
  const double e = kSqrt2OverPi * std::exp(-0.5 * z * z);
  const double g = mu * mu * erfc_z * (2.0 - erfc_z) + s * s - 2.0 * mu * s * e * erf_z - s * s * e * e;
  return std::clamp(g, 0.0, s * s);
}

double folded_square_var(FoldedParams p) {
  require_finite(p, "folded_square_var");
  const double s2 = p.sigma * p.sigma;
  return 4.0 * p.mu * p.mu * s2 + 2.0 * s2 * s2;
}

double folded_mean_dmu(FoldedParams p) {
  require_finite(p, "folded_mean_dmu");
  if (p.sigma == 0.0) throw Error(ErrorCode::SigmaZero, "folded_mean_dmu: sigma must be > 0");
  return normal_two_sided(p.mu / p.sigma);
}

double folded_mean_inverse(double u, double sigma, double eta, const EvalAccuracy& acc) {
  if (!std::isfinite(u) || !std::isfinite(sigma) || !std::isfinite(eta)) {
    throw Error(ErrorCode::NonFinite, "folded_mean_inverse: arguments must be finite");
  }
  if (sigma < 0.0 || !(eta > 0.0)) {
    throw Error(ErrorCode::OutOfDomain, "folded_mean_inverse: need sigma >= 0 and eta > 0");
  }
  const double tol = acc.inverse_rel_tol * std::max(1.0, std::abs(u));
  const double floor_value = folded_mean({eta, sigma});
  if (u < floor_value - tol) {
    throw Error(ErrorCode::OutOfDomain,
                "folded_mean_inverse: u=" + std::to_string(u) + " below f(eta, sigma)=" +
                    std::to_string(floor_value));
  }
  if (u <= floor_value) return eta;
  if (sigma == 0.0) return u;

  // f(mu) >= mu and f(mu)^2 <= mu^2 + sigma^2 put the root in [u - sigma, u].
  double lo = std::max(eta, u - sigma);
  double hi = u;
  for (int it = 0; it < acc.max_iters; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;  // bracket exhausted at double resolution
    if (folded_mean({mid, sigma}) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw Error(ErrorCode::NoConvergence, "folded_mean_inverse: bisection did not reach tolerance");
}

double normal_ratio_m(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "normal_ratio_m: x must be finite");
  if (x < 0.0) throw Error(ErrorCode::OutOfDomain, "normal_ratio_m: x must be >= 0");
  if (x == 0.0) return 0.5;
  return x * normal_pdf(x) / normal_two_sided(x);
}

double j_sigma(double sigma, double eta) {
  if (!std::isfinite(sigma) || !std::isfinite(eta)) {
    throw Error(ErrorCode::NonFinite, "j_sigma: arguments must be finite");
  }
  if (sigma < 0.0 || !(eta > 0.0)) {
    throw Error(ErrorCode::OutOfDomain, "j_sigma: need sigma >= 0 and eta > 0");
  }
  if (sigma == 0.0) return 0.0;
  return sigma * (0.5 - normal_ratio_m(eta / sigma));
}

}  // namespace ascifit
