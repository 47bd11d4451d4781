#include "ascifit/datagen.hpp"

#include <bit>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "ascifit/error.hpp"
#include "ascifit/rng.hpp"

namespace ascifit {
namespace {

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kSignStream = 2;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t fnv1a(std::uint64_t h, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void check_signs(const std::vector<Sign>& xi, std::size_t n) {
  if (xi.size() != n) throw Error(ErrorCode::LengthMismatch, "adversary returned wrong number of signs");
  for (Sign s : xi) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidConfig, "adversary returned a sign outside {-1, +1}");
  }
}

}  // namespace

void AsciModel::validate() const {
  if (mu.empty()) throw Error(ErrorCode::EmptyInput, "model: empty signal");
  if (!std::isfinite(eta) || !(eta > 0.0)) throw Error(ErrorCode::BadEta, "model: eta must be > 0");
  if (!std::isfinite(sigma) || sigma < 0.0) throw Error(ErrorCode::InvalidConfig, "model: sigma must be >= 0");
  for (double m : mu) {
    if (!std::isfinite(m)) throw Error(ErrorCode::NonFinite, "model: non-finite signal entry");
  }
  if (mu.front() < eta) throw Error(ErrorCode::InvalidConfig, "model: mu_1 must be >= eta");
  for (std::size_t i = 1; i < mu.size(); ++i) {
    if (mu[i] < mu[i - 1]) throw Error(ErrorCode::InvalidConfig, "model: signal must be non-decreasing");
  }
  std::visit(Overloaded{
                 [](const adversary::Identity&) {},
                 [](const adversary::Rademacher& a) {
                   if (!(a.p >= 0.0 && a.p <= 1.0)) {
                     throw Error(ErrorCode::InvalidConfig, "model: Rademacher p must lie in [0, 1]");
                   }
                 },
                 [this](const adversary::SignOfGamma& a) {
                   if (a.gamma.size() != mu.size()) {
                     throw Error(ErrorCode::LengthMismatch, "model: gamma and mu differ in length");
                   }
                   for (std::size_t i = 0; i < mu.size(); ++i) {
                     if (std::abs(a.gamma[i]) != mu[i]) {
                       throw Error(ErrorCode::InvalidConfig, "model: mu must equal |gamma|");
                     }
                   }
                 },
                 [](const adversary::ErrorAdaptive& a) {
                   if (!a.rule) throw Error(ErrorCode::InvalidConfig, "model: adaptive adversary has no rule");
                 },
             },
             adversary);
}

std::string AsciModel::digest() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  h = fnv1a(h, eta);
  h = fnv1a(h, sigma);
  for (double m : mu) h = fnv1a(h, m);
  std::string policy = std::visit(Overloaded{
                                      [](const adversary::Identity&) { return std::string("identity"); },
                                      [&h](const adversary::Rademacher& a) {
                                        h = fnv1a(h, a.p);
                                        char buf[48];
                                        std::snprintf(buf, sizeof buf, "rademacher(p=%.17g)", a.p);
                                        return std::string(buf);
                                      },
                                      [&h](const adversary::SignOfGamma& a) {
                                        for (double g : a.gamma) h = fnv1a(h, g);
                                        return std::string("sign_of_gamma");
                                      },
                                      [](const adversary::ErrorAdaptive& a) { return "adaptive(" + a.name + ")"; },
                                  },
                                  adversary);
  char buf[96];
  std::snprintf(buf, sizeof buf, "|n=%zu|%016llx", mu.size(), static_cast<unsigned long long>(h));
  return policy + buf;
}

std::vector<double> linear_signal(std::size_t n, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::BadEta, "linear_signal: eta must lie in (0, 1)");
  if (n == 0) throw Error(ErrorCode::EmptyInput, "linear_signal: n must be >= 1");
  std::vector<double> mu(n);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = eta + (1.0 - eta) * static_cast<double>(i) / nn;
  return mu;
}

AsciModel sign_of_gamma_model(std::vector<double> gamma, double eta, double sigma) {
  AsciModel m;
  m.mu.resize(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) m.mu[i] = std::abs(gamma[i]);
  m.eta = eta;
  m.sigma = sigma;
  m.adversary = adversary::SignOfGamma{std::move(gamma)};
  m.validate();
  return m;
}

SampleSet generate(const AsciModel& model, std::size_t n, std::uint64_t seed) {
  if (n != model.mu.size()) throw Error(ErrorCode::LengthMismatch, "generate: n differs from signal length");
  model.validate();

  SampleSet s;
  s.seed = seed;
  s.model_digest = model.digest();
  s.clean.resize(n);

  Engine noise_engine(derive_seed(seed, {kNoiseStream}));
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Draw unconditionally so the stream position never depends on sigma.
    const double z = normal(noise_engine);
    s.clean[i] = model.mu[i] + model.sigma * z;
  }

  s.xi = std::visit(Overloaded{
                        [n](const adversary::Identity&) { return std::vector<Sign>(n, 1); },
                        [n, seed](const adversary::Rademacher& a) {
                          Engine sign_engine(derive_seed(seed, {kSignStream}));
                          boost::random::bernoulli_distribution<double> coin(a.p);
                          std::vector<Sign> xi(n);
                          for (Sign& x : xi) x = coin(sign_engine) ? 1 : -1;
                          return xi;
                        },
                        [](const adversary::SignOfGamma& a) {
                          std::vector<Sign> xi(a.gamma.size());
                          for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = a.gamma[i] < 0.0 ? -1 : 1;
                          return xi;
                        },
                        [&s](const adversary::ErrorAdaptive& a) { return a.rule(s.clean); },
                    },
                    model.adversary);
  check_signs(s.xi, n);

  s.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.r[i] = static_cast<double>(s.xi[i]) * s.clean[i];
  return s;
}

std::vector<Sign> worst_case_adaptive(std::span<const double> clean) {
  std::vector<Sign> xi(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) xi[i] = clean[i] < 0.0 ? 1 : -1;
  return xi;
}

}  // namespace ascifit
