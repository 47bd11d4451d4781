#pragma once

// Simulation grid runner: one seeded replication per (eta, p, sigma, n, rep),
// CSV output, per-cell summaries and the log-log rate check.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ascifit/estimator.hpp"

namespace ascifit {

struct SimConfig {
  std::vector<double> etas{0.2};
  std::vector<double> ps{0.5};
  std::vector<double> sigmas{0.5, 1.0, 1.5, 2.0};
  std::vector<std::size_t> ns{100, 250, 500, 1000};
  std::size_t reps = 50;
  std::uint64_t master_seed = 20220601;
  std::string signal = "linear";
  std::size_t parallelism = 0;  // 0: hardware concurrency

  void validate() const;
  std::size_t cells() const { return etas.size() * ps.size() * sigmas.size() * ns.size(); }
};

/// JSON keys match the field names; absent keys keep their defaults.
/// Throws InvalidConfig on malformed input.
SimConfig sim_config_from_json(std::string_view text);
std::string sim_config_to_json(const SimConfig& cfg);

struct SimRecord {
  double eta = 0.0;
  double p = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double mse_ascifit = 0.0;
  double mse_naive = 0.0;
  double sigma_hat = 0.0;
  bool bracket_valid = false;
  std::int64_t runtime_ms = 0;
  std::string failure;  // empty on success; MSE fields are NaN otherwise

  bool ok() const { return failure.empty(); }
};

struct RunOptions {
  /// Wall-clock timing makes runtime_ms non-reproducible; off by default so
  /// the records CSV is a pure function of the config.
  bool record_timing = false;
};

/// Seed of one replication; depends only on the master seed and the cell
/// values, not on grid ordering.
std::uint64_t replication_seed(std::uint64_t master, double eta, double p, double sigma, std::size_t n,
                               std::size_t rep);

/// Signal named by cfg.signal for the given size.
std::vector<double> make_signal(const std::string& kind, std::size_t n, double eta);

/// Runs one replication. Estimator failures are caught into SimRecord::failure.
SimRecord run_replication(double eta, double p, double sigma, std::size_t n, std::size_t rep, std::uint64_t seed,
                          const std::string& signal, bool record_timing = false);

/// Every (cell x rep), sorted by (eta, p, sigma, n, rep) regardless of the
/// thread count.
std::vector<SimRecord> run_grid(const SimConfig& cfg, const RunOptions& opts = {});

struct CellSummary {
  double eta = 0.0;
  double p = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t failures = 0;
  double mean_mse_ascifit = 0.0;
  double se_mse_ascifit = 0.0;
  double mean_mse_naive = 0.0;
  double se_mse_naive = 0.0;
  double mean_sigma_hat = 0.0;
};

/// Mean and standard error (sample SD / sqrt(k), 0 for k = 1) per cell.
/// Failed records are counted but excluded from the statistics.
std::vector<CellSummary> summarize(const std::vector<SimRecord>& records);

struct RateCheck {
  double eta = 0.0;
  double p = 0.0;
  double sigma = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::size_t> ns;
  std::vector<double> residuals;  // log(mean MSE) - fitted line
};

/// Least-squares fit of log(mse) on log(n). Needs >= 3 distinct n.
RateCheck fit_log_slope(const std::vector<std::size_t>& ns, const std::vector<double>& mse);

/// Slope of log(mean_mse_ascifit) vs log(n) for the rows at `sigma`. Throws
/// InvalidConfig when those rows span more than one (eta, p).
RateCheck rate_check(const std::vector<CellSummary>& summary, double sigma);

/// One RateCheck per (eta, p, sigma) group, in summary order.
std::vector<RateCheck> rate_check_table(const std::vector<CellSummary>& summary);

/// Fraction of successful, bracket-valid records whose MSE lies below
/// rate_envelope for the linear signal of that record.
double envelope_coverage(const std::vector<SimRecord>& records, const RateBoundConfig& rb = {});

// CSV I/O. Numbers use shortest round-trip formatting, '.' decimal.
inline constexpr const char* kRecordsHeader =
    "eta,p,sigma,n,rep,seed,mse_ascifit,mse_naive,sigma_hat,bracket_valid,runtime_ms";
inline constexpr const char* kSummaryHeader =
    "eta,p,sigma,n,reps,failures,mean_mse_ascifit,se_mse_ascifit,mean_mse_naive,se_mse_naive,mean_sigma_hat";

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& summary);
std::vector<CellSummary> read_summary_csv(std::istream& is);

std::string format_double(double v);

}  // namespace ascifit
