#pragma once

// Seeded generators for R_i = xi_i (mu_i + eps_i), eps_i ~ N(0, sigma^2),
// 0 < eta <= mu_1 <= ... <= mu_n, xi_i in {-1, +1}.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ascifit {

using Sign = std::int8_t;
using SignRule = std::function<std::vector<Sign>(std::span<const double> clean)>;

namespace adversary {

/// xi_i = +1: plain isotonic regression.
struct Identity {};

/// xi_i = +1 with probability p, drawn independently of the noise.
struct Rademacher {
  double p = 0.5;
};

/// xi_i = sgn(gamma_i) with mu_i = |gamma_i|; reproduces R_i = gamma_i + eps_i
/// in distribution.
struct SignOfGamma {
  std::vector<double> gamma;
};

/// Deterministic function of the whole realized vector mu + eps.
struct ErrorAdaptive {
  std::string name;
  SignRule rule;
};

}  // namespace adversary

using AdversaryPolicy =
    std::variant<adversary::Identity, adversary::Rademacher, adversary::SignOfGamma, adversary::ErrorAdaptive>;

struct AsciModel {
  std::vector<double> mu;
  double eta = 0.0;
  double sigma = 0.0;
  AdversaryPolicy adversary = adversary::Identity{};

  void validate() const;
  /// Stable text identifier of the model (policy, sizes, parameter hash).
  std::string digest() const;
};

struct SampleSet {
  std::vector<double> r;
  std::vector<double> clean;
  std::vector<Sign> xi;
  std::uint64_t seed = 0;
  std::string model_digest;
};

/// mu_i = eta + (1 - eta)(i - 1)/n, i = 1..n. Throws BadEta unless 0 < eta < 1.
std::vector<double> linear_signal(std::size_t n, double eta);

/// Model with mu = |gamma| and the SignOfGamma policy.
AsciModel sign_of_gamma_model(std::vector<double> gamma, double eta, double sigma);

/// Draws one sample. Noise and Rademacher signs come from separate substreams
/// of `seed`, so changing p leaves the noise untouched.
SampleSet generate(const AsciModel& model, std::size_t n, std::uint64_t seed);

/// xi_i = -sgn(clean_i) (zero maps to -1): every response becomes <= 0.
std::vector<Sign> worst_case_adaptive(std::span<const double> clean);

}  // namespace ascifit
