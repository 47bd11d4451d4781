#include "ascifit/oracle.hpp"

#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <limits>

#include "ascifit/error.hpp"
#include "ascifit/rng.hpp"

namespace ascifit::oracle {

void GridScanSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi) || !(step > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "grid scan needs lo < hi and step > 0");
  }
  if ((hi - lo) / step > 1e8) throw Error(ErrorCode::TooLarge, "grid scan exceeds 1e8 points");
}

std::size_t GridScanSpec::points() const {
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double root_scan(double target, std::span<const double> t_hat, const EstimatorConfig& cfg, const GridScanSpec& spec) {
  spec.validate();
  const std::size_t count = spec.points();
  double best_sigma = spec.lo;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const double sigma = spec.lo + static_cast<double>(k) * spec.step;
    const double gap = std::abs(big_g(sigma, t_hat, cfg) - target);
    if (gap < best_gap) {
      best_gap = gap;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

McMoments mc_folded_moments(FoldedParams p, std::size_t draws, std::uint64_t seed) {
  if (draws < 10000) throw Error(ErrorCode::InvalidConfig, "mc_folded_moments needs at least 1e4 draws");
  Engine engine(derive_seed(seed, {0x4D43ULL}));
  boost::random::normal_distribution<double> normal(p.mu, p.sigma);

  std::vector<double> t(draws);
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (double& v : t) {
    v = std::abs(normal(engine));
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
  }
  const long double n = static_cast<long double>(draws);
  const long double mean = sum / n;
  const long double mean_sq = sum_sq / n;

  // Central moments of T (orders 2, 4) and of T^2 (orders 2, 4).
  long double c2 = 0, c4 = 0, s2 = 0, s4 = 0;
  for (double v : t) {
    const long double d = v - mean;
    const long double d2 = d * d;
    c2 += d2;
    c4 += d2 * d2;
    const long double e = static_cast<long double>(v) * v - mean_sq;
    const long double e2 = e * e;
    s2 += e2;
    s4 += e2 * e2;
  }
  c2 /= n;
  c4 /= n;
  s2 /= n;
  s4 /= n;

  McMoments m;
  m.mean = static_cast<double>(mean);
  m.variance = static_cast<double>(c2 * n / (n - 1));
  m.square_variance = static_cast<double>(s2 * n / (n - 1));
  m.mean_se = static_cast<double>(std::sqrt(c2 / n));
  m.variance_se = static_cast<double>(std::sqrt(std::max(0.0L, c4 - c2 * c2) / n));
  m.square_variance_se = static_cast<double>(std::sqrt(std::max(0.0L, s4 - s2 * s2) / n));
  return m;
}

std::vector<double> projection_qp_oracle(std::span<const double> y, double floor) {
  const std::size_t n = y.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "projection_qp_oracle: empty input");
  if (n > kMaxQpOracleSize) throw Error(ErrorCode::TooLarge, "projection_qp_oracle: n must be <= 10");

  std::vector<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<double> candidate(n);
  // Bit k of `cuts` set means a block boundary between k and k + 1.
  for (std::uint32_t cuts = 0; cuts < (1U << (n - 1)); ++cuts) {
    std::size_t start = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool boundary = k + 1 == n || ((cuts >> k) & 1U);
      if (!boundary) continue;
      double s = 0.0;
      for (std::size_t i = start; i <= k; ++i) s += y[i];
      double level = s / static_cast<double>(k - start + 1);
      if (level < floor) level = floor;
      for (std::size_t i = start; i <= k; ++i) candidate[i] = level;
      start = k + 1;
    }
    bool feasible = true;
    for (std::size_t i = 1; i < n && feasible; ++i) feasible = candidate[i - 1] <= candidate[i];
    if (!feasible) continue;
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) dist += (y[i] - candidate[i]) * (y[i] - candidate[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best = candidate;
    }
  }
  return best;
}

}  // namespace ascifit::oracle
