#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "ascifit/error.hpp"
#include "ascifit/harness.hpp"

using Catch::Approx;
using namespace ascifit;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.sigmas = {0.5, 2.0};
  cfg.ns = {50, 120, 200};
  cfg.reps = 4;
  cfg.master_seed = 99;
  return cfg;
}

std::string records_csv(const SimConfig& cfg) {
  std::ostringstream os;
  write_records_csv(os, run_grid(cfg));
  return os.str();
}

SimRecord record(double sigma, std::size_t n, std::size_t rep, double mse) {
  SimRecord r;
  r.eta = 0.2;
  r.p = 0.5;
  r.sigma = sigma;
  r.n = n;
  r.rep = rep;
  r.mse_ascifit = mse;
  r.mse_naive = 2 * mse;
  r.sigma_hat = sigma;
  r.bracket_valid = true;
  return r;
}

}  // namespace

TEST_CASE("SimConfig: defaults are the 4 x 4 x 50 grid", "[harness]") {
  const SimConfig cfg;
  CHECK(cfg.cells() == 16);
  CHECK(cfg.reps == 50);
  CHECK(cfg.etas == std::vector<double>{0.2});
  CHECK(cfg.ps == std::vector<double>{0.5});
}

TEST_CASE("SimConfig: JSON round trip and validation", "[harness]") {
  SimConfig cfg = small_config();
  cfg.parallelism = 3;
  const SimConfig back = sim_config_from_json(sim_config_to_json(cfg));
  CHECK(back.sigmas == cfg.sigmas);
  CHECK(back.ns == cfg.ns);
  CHECK(back.reps == cfg.reps);
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.parallelism == 3);

  CHECK(sim_config_from_json("{\"reps\": 2}").sigmas == SimConfig{}.sigmas);
  CHECK(sim_config_from_json("{\"master_seed\": 18446744073709551615}").master_seed == 18446744073709551615ULL);
  CHECK_THROWS_AS(sim_config_from_json("{\"reps\": 0}"), Error);
  CHECK_THROWS_AS(sim_config_from_json("{\"ns\": []}"), Error);
  CHECK_THROWS_AS(sim_config_from_json("{\"signal\": \"step\"}"), Error);
  CHECK_THROWS_AS(sim_config_from_json("{\"etas\": [1.5]}"), Error);
  CHECK_THROWS_AS(sim_config_from_json("not json"), Error);
  CHECK_THROWS_AS(sim_config_from_json("{\"reps\": \"many\"}"), Error);
}

TEST_CASE("run_grid: one sorted record per cell and rep", "[harness]") {
  SimConfig cfg = small_config();
  cfg.ns = {200, 50, 120};  // unsorted on purpose
  const auto records = run_grid(cfg);
  REQUIRE(records.size() == 2 * 3 * 4);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    CHECK(std::tie(a.eta, a.p, a.sigma, a.n, a.rep) < std::tie(b.eta, b.p, b.sigma, b.n, b.rep));
  }
  for (const auto& r : records) {
    CHECK(r.ok());
    CHECK(r.mse_ascifit >= 0.0);
    CHECK(r.mse_naive >= 0.0);
    CHECK(r.seed == replication_seed(cfg.master_seed, r.eta, r.p, r.sigma, r.n, r.rep));
    CHECK(r.runtime_ms == 0);
  }
}

TEST_CASE("run_grid: deterministic across runs and thread counts", "[harness]") {
  SimConfig cfg = small_config();
  cfg.parallelism = 1;
  const std::string serial = records_csv(cfg);
  CHECK(records_csv(cfg) == serial);
  cfg.parallelism = 8;
  CHECK(records_csv(cfg) == serial);
  cfg.master_seed = 100;
  CHECK(records_csv(cfg) != serial);
}

TEST_CASE("run_replication: estimator failures become annotations", "[harness]") {
  const SimRecord r = run_replication(0.2, 0.5, 1.0, 10, 0, 1, "no-such-signal");
  CHECK_FALSE(r.ok());
  CHECK(std::isnan(r.mse_ascifit));
  CHECK_FALSE(r.bracket_valid);
}

TEST_CASE("summarize: mean and standard error", "[harness]") {
  const auto one = summarize({record(1.0, 100, 0, 0.7)});
  REQUIRE(one.size() == 1);
  CHECK(one[0].mean_mse_ascifit == 0.7);
  CHECK(one[0].se_mse_ascifit == 0.0);

  const auto two = summarize({record(1.0, 100, 0, 1.0), record(1.0, 100, 1, 3.0)});
  REQUIRE(two.size() == 1);
  CHECK(two[0].mean_mse_ascifit == Approx(2.0));
  CHECK(two[0].se_mse_ascifit == Approx(1.0));
  CHECK(two[0].mean_mse_naive == Approx(4.0));
  CHECK(two[0].se_mse_naive == Approx(2.0));
  CHECK(two[0].reps == 2);

  auto failed = record(1.0, 100, 2, 0.0);
  failed.failure = "boom";
  const auto with_failure = summarize({record(1.0, 100, 0, 1.0), failed});
  CHECK(with_failure[0].reps == 2);
  CHECK(with_failure[0].failures == 1);
  CHECK(with_failure[0].mean_mse_ascifit == 1.0);

  CHECK_THROWS_MATCHES(summarize({}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::EmptyInput; }));
}

TEST_CASE("rate_check: exact power laws", "[harness]") {
  std::vector<CellSummary> rows;
  for (std::size_t n : {100, 250, 500, 1000}) {
    CellSummary s;
    s.eta = 0.2;
    s.p = 0.5;
    s.sigma = 1.0;
    s.n = n;
    s.mean_mse_ascifit = 3.0 * std::pow(static_cast<double>(n), -2.0 / 3.0);
    rows.push_back(s);
    s.sigma = 2.0;
    s.mean_mse_ascifit = 0.25;
    rows.push_back(s);
  }
  const RateCheck a = rate_check(rows, 1.0);
  CHECK(a.slope == Approx(-2.0 / 3.0).margin(1e-12));
  CHECK(a.intercept == Approx(std::log(3.0)).margin(1e-12));
  for (double r : a.residuals) CHECK(std::abs(r) <= 1e-12);
  CHECK(rate_check(rows, 2.0).slope == Approx(0.0).margin(1e-12));
  CHECK(rate_check_table(rows).size() == 2);

  rows.resize(4);  // two distinct n per sigma
  CHECK_THROWS_MATCHES(rate_check(rows, 1.0), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::InsufficientPoints;
                       }));
}

TEST_CASE("summary CSV round trip", "[harness]") {
  const auto summary = summarize(run_grid(small_config()));
  std::stringstream ss;
  write_summary_csv(ss, summary);
  const auto back = read_summary_csv(ss);
  REQUIRE(back.size() == summary.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].n == summary[i].n);
    CHECK(back[i].sigma == summary[i].sigma);
    CHECK(back[i].mean_mse_ascifit == summary[i].mean_mse_ascifit);
    CHECK(back[i].se_mse_naive == summary[i].se_mse_naive);
  }
  std::istringstream bad("eta,p,sigma,n\n0.2,0.5,1,100\n");
  CHECK_THROWS_AS(read_summary_csv(bad), Error);
}

TEST_CASE("records CSV: header and formatting", "[harness]") {
  std::ostringstream os;
  write_records_csv(os, {record(1.5, 100, 3, 0.25)});
  CHECK(os.str() == std::string(kRecordsHeader) + "\n0.2,0.5,1.5,100,3,0,0.25,0.5,1.5,1,0\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-20) == "1e-20");
}

TEST_CASE("envelope_coverage: shipped diagnostic constants cover >= 90% of records", "[harness][statistical]") {
  const auto records = run_grid(small_config());
  CHECK(envelope_coverage(records) >= 0.9);
}
