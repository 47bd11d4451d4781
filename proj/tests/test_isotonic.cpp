#include <catch2/catch_amalgamated.hpp>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "ascifit/error.hpp"
#include "ascifit/isotonic.hpp"
#include "ascifit/oracle.hpp"
#include "support.hpp"

using Catch::Approx;
using namespace ascifit;

namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("pava: small cases", "[isotonic]") {
  CHECK(pava(v({1, 2, 3})).values == v({1, 2, 3}));
  CHECK(pava(v({5, 3})).values == v({4, 4}));
  CHECK(pava(v({3, 1, 2})).values == v({2, 2, 2}));
  CHECK(maxmin_oracle(v({3, 1, 2})) == v({2, 2, 2}));
  CHECK(pava(v({7})).values == v({7}));
}

TEST_CASE("pava: ties are not pooled", "[isotonic]") {
  const IsotonicFit fit = pava(v({1, 1, 1}));
  CHECK(fit.values == v({1, 1, 1}));
  CHECK(fit.blocks.size() == 3);
}

TEST_CASE("pava: blocks hold the mean of their inputs", "[isotonic]") {
  const std::vector<double> y = v({4, 2, 6, 1, 9, 8, 8.5});
  const IsotonicFit fit = pava(y);
  std::size_t covered = 0;
  for (const IsotonicBlock& b : fit.blocks) {
    CHECK(b.start == covered);
    double sum = 0.0;
    for (std::size_t i = b.start; i <= b.end; ++i) {
      sum += y[i];
      CHECK(fit.values[i] == b.level);
    }
    CHECK(b.level == Approx(sum / static_cast<double>(b.size())));
    covered = b.end + 1;
  }
  CHECK(covered == y.size());
}

TEST_CASE("pava: error paths", "[isotonic]") {
  auto is = [](ErrorCode c) {
    return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; });
  };
  CHECK_THROWS_MATCHES(pava(std::vector<double>{}), Error, is(ErrorCode::EmptyInput));
  CHECK_THROWS_MATCHES(pava(v({1, std::numeric_limits<double>::quiet_NaN()})), Error, is(ErrorCode::NonFinite));
  CHECK_THROWS_MATCHES(pava_lower_bounded(v({1, 2}), std::numeric_limits<double>::infinity()), Error,
                       is(ErrorCode::NonFinite));
  CHECK_THROWS_MATCHES(maxmin_oracle(std::vector<double>{}), Error, is(ErrorCode::EmptyInput));
}

TEST_CASE("maxmin_oracle: small cases", "[isotonic]") {
  CHECK(maxmin_oracle(v({1, 2, 3})) == v({1, 2, 3}));
  CHECK(maxmin_oracle(v({2, 1})) == v({1.5, 1.5}));
}

TEST_CASE("pava_lower_bounded: small cases", "[isotonic]") {
  CHECK(pava_lower_bounded(v({1, 2, 3}), 0.0).values == v({1, 2, 3}));
  CHECK(pava_lower_bounded(v({-1, 2}), 0.0).values == v({0, 2}));
  CHECK(oracle::projection_qp_oracle(v({-1, 2}), 0.0) == v({0, 2}));
  CHECK(pava_lower_bounded(v({3, 1, 2}), 2.5).values == v({2.5, 2.5, 2.5}));
  CHECK(oracle::projection_qp_oracle(v({3, 1, 2}), 2.5) == v({2.5, 2.5, 2.5}));

  const IsotonicFit fit = pava_lower_bounded(v({-3, -1, 0.5, 4}), 1.0);
  REQUIRE(fit.blocks.size() == 2);
  CHECK(fit.blocks[0].start == 0);
  CHECK(fit.blocks[0].end == 2);
  CHECK(fit.blocks[0].level == 1.0);
}

TEST_CASE("pava: equals maxmin_oracle on 1000 random vectors of length <= 12", "[isotonic][property]") {
  Engine eng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto y = testing::random_vector(eng, 12);
    worst = std::max(worst, max_abs_diff(pava(y).values, maxmin_oracle(y)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("pava: projection properties on random inputs", "[isotonic][property]") {
  Engine eng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto y = testing::random_vector(eng, 60);
    const auto x = pava(y).values;
    const double scale = std::max(1.0, std::abs(*std::max_element(y.begin(), y.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    })));
    const double tol = 1e-9 * static_cast<double>(y.size()) * scale;

    CHECK(std::is_sorted(x.begin(), x.end()));
    CHECK(std::accumulate(x.begin(), x.end(), 0.0) == Approx(std::accumulate(y.begin(), y.end(), 0.0)).margin(tol));

    double cone = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) cone += x[i] * (y[i] - x[i]);
    CHECK(std::abs(cone) <= tol * scale);

    // Variational inequality against random monotone competitors.
    for (int k = 0; k < 10; ++k) {
      const auto w = testing::random_monotone(eng, y.size());
      double vi = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) vi += (y[i] - x[i]) * (w[i] - x[i]);
      CHECK(vi <= tol * scale);
    }

    CHECK(pava(x).values == x);
  }
}

TEST_CASE("pava_lower_bounded: equals enumeration oracle and clamps pava exactly", "[isotonic][property]") {
  Engine eng(99);
  boost::random::uniform_real_distribution<double> floor_dist(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto y = testing::random_vector(eng, 6);
    const double floor = floor_dist(eng);
    const auto lb = pava_lower_bounded(y, floor).values;
    worst = std::max(worst, max_abs_diff(lb, oracle::projection_qp_oracle(y, floor)));
    const auto plain = pava(y).values;
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(lb[i] == std::max(plain[i], floor));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("pava: linear time on a long decreasing input", "[isotonic]") {
  std::vector<double> y(2'000'000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = -static_cast<double>(i);
  const auto start = std::chrono::steady_clock::now();
  const IsotonicFit fit = pava(y);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(fit.blocks.size() == 1);
  CHECK(fit.values.front() == Approx(-(static_cast<double>(y.size()) - 1) / 2));
  CHECK(elapsed < std::chrono::seconds(2));
}
