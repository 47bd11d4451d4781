#include <algorithm>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>

#include "ascifit/datagen.hpp"
#include "ascifit/estimator.hpp"
#include "ascifit/isotonic.hpp"
#include "ascifit/oracle.hpp"
#include "ascifit/rng.hpp"

namespace ascifit::oracle {
namespace {

std::vector<double> random_vector(Engine& eng, std::size_t max_len) {
  boost::random::uniform_int_distribution<std::size_t> len(1, max_len);
  boost::random::uniform_int_distribution<int> coarse(-4, 4);
  boost::random::uniform_real_distribution<double> fine(-5.0, 5.0);
  std::vector<double> y(len(eng));
  // Half the vectors use small integers so that ties and equal block means occur.
  const bool integral = (eng() & 1U) != 0;
  for (double& v : y) v = integral ? coarse(eng) : fine(eng);
  return y;
}

CheckOutcome check_pava(Engine& eng, std::size_t trials) {
  CheckOutcome out{"pava == maxmin_oracle", true, 0.0, 1e-9, trials};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> y = random_vector(eng, 12);
    const std::vector<double> a = pava(y).values;
    const std::vector<double> b = maxmin_oracle(y);
    for (std::size_t i = 0; i < y.size(); ++i) out.max_deviation = std::max(out.max_deviation, std::abs(a[i] - b[i]));
  }
  out.passed = out.max_deviation <= out.tolerance;
  return out;
}

CheckOutcome check_floored(Engine& eng, std::size_t trials) {
  CheckOutcome out{"pava_lower_bounded == projection_qp_oracle", true, 0.0, 1e-9, trials};
  boost::random::uniform_real_distribution<double> floor_dist(-2.0, 2.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> y = random_vector(eng, 6);
    const double floor = floor_dist(eng);
    const std::vector<double> a = pava_lower_bounded(y, floor).values;
    const std::vector<double> b = projection_qp_oracle(y, floor);
    for (std::size_t i = 0; i < y.size(); ++i) out.max_deviation = std::max(out.max_deviation, std::abs(a[i] - b[i]));
  }
  out.passed = out.max_deviation <= out.tolerance;
  return out;
}

CheckOutcome check_root(std::uint64_t seed, std::size_t datasets, std::size_t n, double step) {
  CheckOutcome out{"solve_sigma == root_scan", true, 0.0, 0.0, datasets};
  const double sigmas[] = {0.5, 1.0, 2.0};
  EstimatorConfig cfg;
  cfg.eta = 0.2;
  out.tolerance = std::max(step, cfg.root_tol * 10.0);
  for (std::size_t d = 0; d < datasets; ++d) {
    AsciModel model;
    model.mu = linear_signal(n, cfg.eta);
    model.eta = cfg.eta;
    model.sigma = sigmas[d % 3];
    model.adversary = adversary::Rademacher{0.5};
    const SampleSet s = generate(model, n, derive_seed(seed, {0x524F4F54ULL, d}));
    const std::vector<double> t = preprocess(s.r);
    const std::vector<double> t_hat = pava(t).values;
    double target = 0.0;
    for (double v : t) target += v * v;
    target /= static_cast<double>(n);

    const SigmaSolution sol = solve_sigma(t, t_hat, cfg);
    const double scanned = root_scan(target, t_hat, cfg, {0.0, std::sqrt(target), step});
    out.max_deviation = std::max(out.max_deviation, std::abs(sol.sigma - scanned));
  }
  out.passed = out.max_deviation <= out.tolerance;
  return out;
}

CheckOutcome check_moments(std::uint64_t seed, std::size_t draws) {
  const FoldedParams points[] = {{0.0, 1.0}, {1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}};
  CheckOutcome out{"folded moments == Monte Carlo (in standard errors)", true, 0.0, 4.0, std::size(points)};
  std::uint64_t k = 0;
  for (const FoldedParams& p : points) {
    const McMoments m = mc_folded_moments(p, draws, derive_seed(seed, {0x4D4F4DULL, k++}));
    out.max_deviation = std::max({out.max_deviation, std::abs(m.mean - folded_mean(p)) / m.mean_se,
                                  std::abs(m.variance - folded_var(p)) / m.variance_se,
                                  std::abs(m.square_variance - folded_square_var(p)) / m.square_variance_se});
  }
  out.passed = out.max_deviation <= out.tolerance;
  return out;
}

}  // namespace

std::vector<CheckOutcome> run_equivalence_suite(std::uint64_t seed, bool quick) {
  Engine eng(derive_seed(seed, {0x564552ULL}));
  std::vector<CheckOutcome> out;
  out.push_back(check_pava(eng, quick ? 200 : 1000));
  out.push_back(check_floored(eng, quick ? 100 : 500));
  out.push_back(check_root(seed, quick ? 3 : 6, quick ? 300 : 1000, 1e-3));
  out.push_back(check_moments(seed, quick ? 100000 : 1000000));
  return out;
}

}  // namespace ascifit::oracle
