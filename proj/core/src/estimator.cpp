#include "ascifit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ascifit/error.hpp"
#include "ascifit/isotonic.hpp"

namespace ascifit {
namespace {

void require_finite(std::span<const double> v, const char* where) {
  if (v.empty()) throw Error(ErrorCode::EmptyInput, std::string(where) + ": empty input");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, std::string(where) + ": non-finite entry");
  }
}

double mean_square(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

// f^-1(max(u, f(eta, sigma)), sigma) with the clamp resolved up front.
double clamped_inverse(double u, double sigma, double floor_value, const EstimatorConfig& cfg) {
  if (u <= floor_value) return cfg.eta;
  return folded_mean_inverse(u, sigma, cfg.eta, cfg.accuracy);
}

double clamp_to_bracket(double sigma, const EstimatorConfig& cfg) {
  sigma = std::max(sigma, cfg.sigma_bracket_floor);
  if (cfg.sigma_bracket_ceiling) sigma = std::min(sigma, *cfg.sigma_bracket_ceiling);
  return sigma;
}

}  // namespace

void EstimatorConfig::validate() const {
  if (!std::isfinite(eta) || !(eta > 0.0)) throw Error(ErrorCode::BadEta, "eta must be finite and > 0");
  if (!(root_tol > 0.0) || root_max_iters < 1) {
    throw Error(ErrorCode::InvalidConfig, "root_tol and root_max_iters must be positive");
  }
  if (!std::isfinite(sigma_bracket_floor) || sigma_bracket_floor < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "sigma floor must be finite and >= 0");
  }
  if (sigma_bracket_ceiling &&
      (!std::isfinite(*sigma_bracket_ceiling) || *sigma_bracket_ceiling < sigma_bracket_floor)) {
    throw Error(ErrorCode::InvalidConfig, "sigma ceiling must be finite and >= sigma floor");
  }
  accuracy.validate();
}

void RateBoundConfig::validate() const {
  if (!(c2 > 0.0) || !(delta > 1.0) || !(gamma > 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "rate bound needs c2 > 0, delta > 1, gamma > 1");
  }
}

std::vector<double> preprocess(std::span<const double> r) {
  require_finite(r, "preprocess");
  std::vector<double> t(r.size());
  std::transform(r.begin(), r.end(), t.begin(), [](double x) { return std::abs(x); });
  return t;
}

double big_g(double sigma, std::span<const double> t_hat, const EstimatorConfig& cfg) {
  if (t_hat.empty()) throw Error(ErrorCode::EmptyInput, "big_g: empty t_hat");
  if (!std::isfinite(sigma) || sigma < 0.0) throw Error(ErrorCode::OutOfDomain, "big_g: sigma must be >= 0");
  const double floor_value = folded_mean({cfg.eta, sigma});

  double sum = 0.0;
  std::size_t i = 0;
  while (i < t_hat.size()) {
    std::size_t j = i + 1;
    while (j < t_hat.size() && t_hat[j] == t_hat[i]) ++j;
    const double mu = clamped_inverse(t_hat[i], sigma, floor_value, cfg);
    sum += static_cast<double>(j - i) * mu * mu;
    i = j;
  }
  return sigma * sigma + sum / static_cast<double>(t_hat.size());
}

SigmaSolution solve_sigma(std::span<const double> t, std::span<const double> t_hat,
                          const EstimatorConfig& cfg) {
  if (t.empty()) throw Error(ErrorCode::EmptyInput, "solve_sigma: empty input");
  if (t.size() != t_hat.size()) throw Error(ErrorCode::LengthMismatch, "solve_sigma: t and t_hat differ in length");

  const double target = mean_square(t);
  const double ceiling = std::sqrt(target);

  SigmaSolution out;
  RootDiagnostics& d = out.diagnostics;
  d.g_at_zero = big_g(0.0, t_hat, cfg);
  d.g_at_ceiling = big_g(ceiling, t_hat, cfg);
  d.bracket_valid = d.g_at_zero <= target && target <= d.g_at_ceiling;

  double sigma = 0.0;
  double g_sigma = d.g_at_zero;
  if (!d.bracket_valid) {
    if (target > d.g_at_ceiling) {
      sigma = ceiling;
      g_sigma = d.g_at_ceiling;
    }
  } else if (std::abs(d.g_at_zero - target) <= cfg.root_tol) {
    sigma = 0.0;
  } else if (std::abs(d.g_at_ceiling - target) <= cfg.root_tol) {
    sigma = ceiling;
    g_sigma = d.g_at_ceiling;
  } else {
    double lo = 0.0;
    double hi = ceiling;
    double best = std::abs(d.g_at_zero - target) <= std::abs(d.g_at_ceiling - target) ? lo : hi;
    double best_g = best == lo ? d.g_at_zero : d.g_at_ceiling;
    while (d.iterations < cfg.root_max_iters) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double g = big_g(mid, t_hat, cfg);
      ++d.iterations;
      if (std::abs(g - target) < std::abs(best_g - target)) {
        best = mid;
        best_g = g;
      }
      if (std::abs(g - target) <= cfg.root_tol) break;
      if (g < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    sigma = best;
    g_sigma = best_g;
  }

  d.residual = std::abs(g_sigma - target);
  d.converged = d.bracket_valid && d.residual <= cfg.root_tol;

  const double clamped = clamp_to_bracket(sigma, cfg);
  if (clamped != sigma) {
    d.clamped = true;
    sigma = clamped;
    d.residual = std::abs(big_g(sigma, t_hat, cfg) - target);
  }
  out.sigma = sigma;
  return out;
}

FitResult fit(std::span<const double> r, const EstimatorConfig& cfg) {
  cfg.validate();
  FitResult res;
  res.t = preprocess(r);
  IsotonicFit iso = pava(res.t);
  res.t_hat = std::move(iso.values);

  SigmaSolution sol = solve_sigma(res.t, res.t_hat, cfg);
  res.sigma_hat = sol.sigma;
  res.diagnostics = sol.diagnostics;

  const std::size_t n = res.t.size();
  const double floor_value = folded_mean({cfg.eta, res.sigma_hat});
  res.mu_hat.resize(n);
  res.mu_naive.resize(n);
  for (const IsotonicBlock& b : iso.blocks) {
    const double mu = clamped_inverse(b.level, res.sigma_hat, floor_value, cfg);
    const double naive = std::max(b.level, cfg.eta);
    for (std::size_t i = b.start; i <= b.end; ++i) {
      res.mu_hat[i] = mu;
      res.mu_naive[i] = naive;
    }
  }
  // Bisection tolerance can reorder two nearly equal levels; restore
  // monotonicity (the correction is below inverse_rel_tol).
  for (std::size_t i = 1; i < n; ++i) res.mu_hat[i] = std::max(res.mu_hat[i], res.mu_hat[i - 1]);
  return res;
}

double rate_bound_r_n2(std::size_t n, double mu_first, double mu_last, double sigma,
                       const RateBoundConfig& rb) {
  if (!std::isfinite(mu_first) || !std::isfinite(mu_last) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NonFinite, "rate_bound_r_n2: arguments must be finite");
  }
  if (n < 1 || mu_last < mu_first || sigma < 0.0) {
    throw Error(ErrorCode::OutOfDomain, "rate_bound_r_n2: need n >= 1, mu_last >= mu_first, sigma >= 0");
  }
  rb.validate();
  const double nn = static_cast<double>(n);
  const double sc = sigma * rb.c2;
  const double flat = 2.0 * sc * sc;
  const double curved = 27.0 / 4.0 * std::pow((mu_last - mu_first) / nn, 2.0 / 3.0) * std::pow(sc, 4.0 / 3.0) +
                        2.0 * sc * sc * (1.0 + std::log(nn)) / nn;
  return std::min(flat, curved);
}

double rate_envelope(std::size_t n, double mu_first, double mu_last, double sigma,
                     const RateBoundConfig& rb) {
  return rb.delta * rate_bound_r_n2(n, mu_first, mu_last, sigma, rb) +
         rb.gamma * rb.gamma / static_cast<double>(n);
}

double mean_squared_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "mean_squared_error: length mismatch");
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "mean_squared_error: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

}  // namespace ascifit
