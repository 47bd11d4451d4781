#include "ascifit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "ascifit/datagen.hpp"
#include "ascifit/error.hpp"
#include "ascifit/rng.hpp"

namespace ascifit {
namespace {

struct Job {
  double eta;
  double p;
  double sigma;
  std::size_t n;
  std::size_t rep;
};

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidConfig, "not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidConfig, "not an integer: '" + s + "'");
  }
  return v;
}

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double k = static_cast<double>(xs.size());
  return {mean, std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

}  // namespace

void SimConfig::validate() const {
  if (etas.empty() || ps.empty() || sigmas.empty() || ns.empty()) {
    throw Error(ErrorCode::InvalidConfig, "every grid list must be non-empty");
  }
  if (reps < 1) throw Error(ErrorCode::InvalidConfig, "reps must be >= 1");
  for (double e : etas) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::BadEta, "etas must lie in (0, 1)");
  }
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "ps must lie in [0, 1]");
  }
  for (double s : sigmas) {
    if (!std::isfinite(s) || s < 0.0) throw Error(ErrorCode::InvalidConfig, "sigmas must be finite and >= 0");
  }
  for (std::size_t n : ns) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "ns must be >= 1");
  }
  if (signal != "linear") throw Error(ErrorCode::InvalidConfig, "unknown signal '" + signal + "'");
}

SimConfig sim_config_from_json(std::string_view text) {
  SimConfig cfg;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    if (j.contains("etas")) j.at("etas").get_to(cfg.etas);
    if (j.contains("ps")) j.at("ps").get_to(cfg.ps);
    if (j.contains("sigmas")) j.at("sigmas").get_to(cfg.sigmas);
    if (j.contains("ns")) j.at("ns").get_to(cfg.ns);
    if (j.contains("reps")) j.at("reps").get_to(cfg.reps);
    if (j.contains("master_seed")) j.at("master_seed").get_to(cfg.master_seed);
    if (j.contains("signal")) j.at("signal").get_to(cfg.signal);
    if (j.contains("parallelism")) j.at("parallelism").get_to(cfg.parallelism);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string sim_config_to_json(const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["etas"] = cfg.etas;
  j["ps"] = cfg.ps;
  j["sigmas"] = cfg.sigmas;
  j["ns"] = cfg.ns;
  j["reps"] = cfg.reps;
  j["master_seed"] = cfg.master_seed;
  j["signal"] = cfg.signal;
  j["parallelism"] = cfg.parallelism;
  return j.dump(2);
}

std::uint64_t replication_seed(std::uint64_t master, double eta, double p, double sigma, std::size_t n,
                               std::size_t rep) {
  return derive_seed(master, {std::bit_cast<std::uint64_t>(eta), std::bit_cast<std::uint64_t>(p),
                              std::bit_cast<std::uint64_t>(sigma), static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(rep)});
}

std::vector<double> make_signal(const std::string& kind, std::size_t n, double eta) {
  if (kind == "linear") return linear_signal(n, eta);
  throw Error(ErrorCode::InvalidConfig, "unknown signal '" + kind + "'");
}

SimRecord run_replication(double eta, double p, double sigma, std::size_t n, std::size_t rep, std::uint64_t seed,
                          const std::string& signal, bool record_timing) {
  SimRecord rec;
  rec.eta = eta;
  rec.p = p;
  rec.sigma = sigma;
  rec.n = n;
  rec.rep = rep;
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    AsciModel model;
    model.mu = make_signal(signal, n, eta);
    model.eta = eta;
    model.sigma = sigma;
    model.adversary = adversary::Rademacher{p};
    const SampleSet sample = generate(model, n, seed);

    EstimatorConfig cfg;
    cfg.eta = eta;
    const FitResult res = fit(sample.r, cfg);
    rec.mse_ascifit = mean_squared_error(res.mu_hat, model.mu);
    rec.mse_naive = mean_squared_error(res.mu_naive, model.mu);
    rec.sigma_hat = res.sigma_hat;
    rec.bracket_valid = res.diagnostics.bracket_valid;
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.mse_ascifit = rec.mse_naive = rec.sigma_hat = nan;
    rec.bracket_valid = false;
    rec.failure = e.what();
  }
  if (record_timing) {
    rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                         .count();
  }
  return rec;
}

std::vector<SimRecord> run_grid(const SimConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  std::vector<Job> jobs;
  for (double eta : sorted_unique(cfg.etas))
    for (double p : sorted_unique(cfg.ps))
      for (double sigma : sorted_unique(cfg.sigmas))
        for (std::size_t n : sorted_unique(cfg.ns))
          for (std::size_t rep = 0; rep < cfg.reps; ++rep) jobs.push_back({eta, p, sigma, n, rep});

  std::vector<SimRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      records[i] = run_replication(j.eta, j.p, j.sigma, j.n, j.rep,
                                   replication_seed(cfg.master_seed, j.eta, j.p, j.sigma, j.n, j.rep), cfg.signal,
                                   opts.record_timing);
    }
  };

  std::size_t threads = cfg.parallelism ? cfg.parallelism : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

std::vector<CellSummary> summarize(const std::vector<SimRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "summarize: no records");
  using Key = std::tuple<double, double, double, std::size_t>;
  struct Acc {
    std::size_t reps = 0;
    std::size_t failures = 0;
    std::vector<double> ascifit, naive, sigma_hat;
  };
  std::map<Key, Acc> cells;
  for (const SimRecord& r : records) {
    Acc& a = cells[{r.eta, r.p, r.sigma, r.n}];
    ++a.reps;
    if (!r.ok()) {
      ++a.failures;
      continue;
    }
    a.ascifit.push_back(r.mse_ascifit);
    a.naive.push_back(r.mse_naive);
    a.sigma_hat.push_back(r.sigma_hat);
  }

  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (const auto& [key, a] : cells) {
    CellSummary s;
    std::tie(s.eta, s.p, s.sigma, s.n) = key;
    s.reps = a.reps;
    s.failures = a.failures;
    std::tie(s.mean_mse_ascifit, s.se_mse_ascifit) = mean_and_se(a.ascifit);
    std::tie(s.mean_mse_naive, s.se_mse_naive) = mean_and_se(a.naive);
    s.mean_sigma_hat = mean_and_se(a.sigma_hat).first;
    out.push_back(s);
  }
  return out;
}

RateCheck fit_log_slope(const std::vector<std::size_t>& ns, const std::vector<double>& mse) {
  if (ns.size() != mse.size()) throw Error(ErrorCode::LengthMismatch, "fit_log_slope: length mismatch");
  if (sorted_unique(ns).size() < 3) throw Error(ErrorCode::InsufficientPoints, "rate check needs >= 3 distinct n");
  for (double m : mse) {
    if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorCode::NonFinite, "rate check needs positive finite MSE");
  }
  const std::size_t k = ns.size();
  std::vector<double> x(k), y(k);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(static_cast<double>(ns[i]));
    y[i] = std::log(mse[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  RateCheck rc;
  rc.slope = sxy / sxx;
  rc.intercept = my - rc.slope * mx;
  rc.ns = ns;
  rc.residuals.resize(k);
  for (std::size_t i = 0; i < k; ++i) rc.residuals[i] = y[i] - (rc.intercept + rc.slope * x[i]);
  return rc;
}

RateCheck rate_check(const std::vector<CellSummary>& summary, double sigma) {
  std::vector<std::size_t> ns;
  std::vector<double> mse;
  std::optional<std::pair<double, double>> group;
  for (const CellSummary& s : summary) {
    if (s.sigma != sigma) continue;
    if (group && *group != std::pair{s.eta, s.p}) {
      throw Error(ErrorCode::InvalidConfig, "rate_check: rows at this sigma span several (eta, p)");
    }
    group = std::pair{s.eta, s.p};
    ns.push_back(s.n);
    mse.push_back(s.mean_mse_ascifit);
  }
  if (!group) throw Error(ErrorCode::InsufficientPoints, "rate_check: no rows at sigma");
  RateCheck rc = fit_log_slope(ns, mse);
  rc.eta = group->first;
  rc.p = group->second;
  rc.sigma = sigma;
  return rc;
}

std::vector<RateCheck> rate_check_table(const std::vector<CellSummary>& summary) {
  using Key = std::tuple<double, double, double>;
  std::vector<Key> order;
  std::map<Key, std::pair<std::vector<std::size_t>, std::vector<double>>> groups;
  for (const CellSummary& s : summary) {
    const Key key{s.eta, s.p, s.sigma};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(s.n);
    it->second.second.push_back(s.mean_mse_ascifit);
  }
  std::vector<RateCheck> out;
  for (const Key& key : order) {
    const auto& [ns, mse] = groups.at(key);
    RateCheck rc = fit_log_slope(ns, mse);
    std::tie(rc.eta, rc.p, rc.sigma) = key;
    out.push_back(std::move(rc));
  }
  return out;
}

double envelope_coverage(const std::vector<SimRecord>& records, const RateBoundConfig& rb) {
  std::size_t eligible = 0, covered = 0;
  for (const SimRecord& r : records) {
    if (!r.ok() || !r.bracket_valid) continue;
    ++eligible;
    const double last = r.eta + (1.0 - r.eta) * static_cast<double>(r.n - 1) / static_cast<double>(r.n);
    if (r.mse_ascifit <= rate_envelope(r.n, r.eta, last, r.sigma, rb)) ++covered;
  }
  if (eligible == 0) throw Error(ErrorCode::EmptyInput, "envelope_coverage: no bracket-valid records");
  return static_cast<double>(covered) / static_cast<double>(eligible);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const SimRecord& r : records) {
    os << format_double(r.eta) << ',' << format_double(r.p) << ',' << format_double(r.sigma) << ',' << r.n << ','
       << r.rep << ',' << r.seed << ',' << format_double(r.mse_ascifit) << ',' << format_double(r.mse_naive) << ','
       << format_double(r.sigma_hat) << ',' << (r.bracket_valid ? 1 : 0) << ',' << r.runtime_ms << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& summary) {
  os << kSummaryHeader << '\n';
  for (const CellSummary& s : summary) {
    os << format_double(s.eta) << ',' << format_double(s.p) << ',' << format_double(s.sigma) << ',' << s.n << ','
       << s.reps << ',' << s.failures << ',' << format_double(s.mean_mse_ascifit) << ','
       << format_double(s.se_mse_ascifit) << ',' << format_double(s.mean_mse_naive) << ','
       << format_double(s.se_mse_naive) << ',' << format_double(s.mean_sigma_hat) << '\n';
  }
}

std::vector<CellSummary> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::EmptyInput, "summary CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  auto column = [&](const char* name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::InvalidConfig, std::string("summary CSV lacks column ") + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_eta = column("eta"), c_p = column("p"), c_sigma = column("sigma"), c_n = column("n"),
                    c_mse = column("mean_mse_ascifit");
  // Optional columns.
  auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_reps = optional_column("reps"), c_fail = optional_column("failures"),
             c_se = optional_column("se_mse_ascifit"), c_naive = optional_column("mean_mse_naive"),
             c_se_naive = optional_column("se_mse_naive"), c_sig = optional_column("mean_sigma_hat");

  std::vector<CellSummary> out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) throw Error(ErrorCode::InvalidConfig, "summary CSV row has wrong field count");
    CellSummary s;
    s.eta = parse_double(f[c_eta]);
    s.p = parse_double(f[c_p]);
    s.sigma = parse_double(f[c_sigma]);
    s.n = parse_size(f[c_n]);
    s.mean_mse_ascifit = parse_double(f[c_mse]);
    if (c_reps) s.reps = parse_size(f[*c_reps]);
    if (c_fail) s.failures = parse_size(f[*c_fail]);
    if (c_se) s.se_mse_ascifit = parse_double(f[*c_se]);
    if (c_naive) s.mean_mse_naive = parse_double(f[*c_naive]);
    if (c_se_naive) s.se_mse_naive = parse_double(f[*c_se_naive]);
    if (c_sig) s.mean_sigma_hat = parse_double(f[*c_sig]);
    out.push_back(s);
  }
  return out;
}

}  // namespace ascifit
