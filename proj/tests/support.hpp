#pragma once

#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cstdint>
#include <vector>

#include "ascifit/datagen.hpp"
#include "ascifit/rng.hpp"

namespace ascifit::testing {

/// Random vector of length in [1, max_len]; every other call draws small
/// integers so ties show up.
inline std::vector<double> random_vector(Engine& eng, std::size_t max_len, double scale = 5.0) {
  boost::random::uniform_int_distribution<std::size_t> len(1, max_len);
  boost::random::uniform_int_distribution<int> coarse(-4, 4);
  boost::random::uniform_real_distribution<double> fine(-scale, scale);
  std::vector<double> y(len(eng));
  const bool integral = (eng() & 1U) != 0;
  for (double& v : y) v = integral ? coarse(eng) : fine(eng);
  return y;
}

/// Random non-decreasing vector of length n.
inline std::vector<double> random_monotone(Engine& eng, std::size_t n) {
  boost::random::uniform_real_distribution<double> step(0.0, 1.0);
  boost::random::uniform_real_distribution<double> start(-3.0, 3.0);
  std::vector<double> w(n);
  double v = start(eng);
  for (double& x : w) {
    x = v;
    if (eng() % 3 == 0) v += step(eng);
  }
  return w;
}

/// Rademacher-corrupted sample on the linear signal.
inline SampleSet example1(std::size_t n, double sigma, double eta, double p, std::uint64_t seed) {
  AsciModel model;
  model.mu = linear_signal(n, eta);
  model.eta = eta;
  model.sigma = sigma;
  model.adversary = adversary::Rademacher{p};
  return generate(model, n, seed);
}

inline double mean_square(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

}  // namespace ascifit::testing
