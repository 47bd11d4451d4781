#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "ascifit/datagen.hpp"
#include "ascifit/error.hpp"
#include "ascifit/estimator.hpp"
#include "ascifit/harness.hpp"
#include "ascifit/oracle.hpp"

namespace ascifit::cli {
namespace {

std::string trim(std::string s) {
  // U+2212 MINUS SIGN is accepted as '-'.
  for (std::size_t pos; (pos = s.find("\xE2\x88\x92")) != std::string::npos;) s.replace(pos, 3, "-");
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return os;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct FitOptions {
  std::string input;
  std::string column;
  std::string out;
  double eta = 0.0;
  double sigma_floor = 0.0;
  std::optional<double> sigma_ceiling;
  std::optional<double> tol;
};

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> r = read_responses(o.input, o.column);
  EstimatorConfig cfg;
  cfg.eta = o.eta;
  cfg.sigma_bracket_floor = o.sigma_floor;
  cfg.sigma_bracket_ceiling = o.sigma_ceiling;
  if (o.tol) cfg.root_tol = *o.tol;
  const FitResult res = fit(r, cfg);

  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file = open_output(o.out), file);
  os << "i,r,t_hat,mu_naive,mu_hat,sigma_hat\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << i << ',' << format_double(r[i]) << ',' << format_double(res.t_hat[i]) << ','
       << format_double(res.mu_naive[i]) << ',' << format_double(res.mu_hat[i]) << ','
       << format_double(res.sigma_hat) << '\n';
  }

  const RootDiagnostics& d = res.diagnostics;
  err << "sigma_hat=" << format_double(res.sigma_hat) << " bracket_valid=" << d.bracket_valid
      << " iterations=" << d.iterations << " residual=" << format_double(d.residual) << '\n';
  if (!d.bracket_valid) {
    err << "warning: G(0) <= mean(T^2) <= G(sqrt(mean(T^2))) does not hold; sigma_hat is a clamped endpoint\n";
    return kOk;
  }
  if (!d.converged && !d.clamped) {
    err << "error: sigma root finding did not reach the tolerance\n";
    return kNumericalFailure;
  }
  return kOk;
}

struct SimulateOptions {
  std::string config;
  std::string out_dir = ".";
  std::string records = "records.csv";
  std::string summary = "summary.csv";
  std::optional<std::size_t> parallelism;
  bool timing = false;
};

int cmd_simulate(const SimulateOptions& o, std::optional<std::uint64_t> seed, std::ostream& out,
                 std::ostream& err) {
  SimConfig cfg = o.config.empty() ? SimConfig{} : sim_config_from_json(read_file(o.config));
  if (seed) cfg.master_seed = *seed;
  if (o.parallelism) cfg.parallelism = *o.parallelism;

  const std::vector<SimRecord> records = run_grid(cfg, {o.timing});
  const std::vector<CellSummary> summary = summarize(records);

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream os = open_output(dir / o.records);
    write_records_csv(os, records);
  }
  {
    std::ofstream os = open_output(dir / o.summary);
    write_summary_csv(os, summary);
  }

  const auto failures = std::count_if(records.begin(), records.end(), [](const SimRecord& r) { return !r.ok(); });
  out << "wrote " << records.size() << " records and " << summary.size() << " cells to " << dir.string() << '\n';
  if (failures > 0) {
    err << "warning: " << failures << " replications failed; their MSE fields are nan\n";
    for (const SimRecord& r : records) {
      if (!r.ok()) {
        err << "  sigma=" << r.sigma << " n=" << r.n << " rep=" << r.rep << ": " << r.failure << '\n';
        break;
      }
    }
  }
  return kOk;
}

int cmd_rate_check(const std::string& path, std::optional<double> sigma, std::ostream& out) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot read " + path);
  const std::vector<CellSummary> summary = read_summary_csv(is);
  std::vector<RateCheck> table;
  if (sigma) {
    table.push_back(rate_check(summary, *sigma));
  } else {
    table = rate_check_table(summary);
  }
  out << "eta,p,sigma,slope,intercept,max_abs_residual,points\n";
  for (const RateCheck& rc : table) {
    double worst = 0.0;
    for (double r : rc.residuals) worst = std::max(worst, std::abs(r));
    out << format_double(rc.eta) << ',' << format_double(rc.p) << ',' << format_double(rc.sigma) << ','
        << format_double(rc.slope) << ',' << format_double(rc.intercept) << ',' << format_double(worst) << ','
        << rc.ns.size() << '\n';
  }
  return kOk;
}

struct SampleOptions {
  std::size_t n = 1000;
  double eta = 0.2;
  double sigma = 1.5;
  double p = 0.5;
  std::string out;
};

int cmd_sample(const SampleOptions& o, std::uint64_t seed, std::ostream& out) {
  AsciModel model;
  model.mu = linear_signal(o.n, o.eta);
  model.eta = o.eta;
  model.sigma = o.sigma;
  model.adversary = adversary::Rademacher{o.p};
  const SampleSet s = generate(model, o.n, seed);

  std::ofstream file;
  std::ostream& os = o.out.empty() ? out : (file = open_output(o.out), file);
  os << "i,mu,clean,xi,r\n";
  for (std::size_t i = 0; i < o.n; ++i) {
    os << i << ',' << format_double(model.mu[i]) << ',' << format_double(s.clean[i]) << ','
       << static_cast<int>(s.xi[i]) << ',' << format_double(s.r[i]) << '\n';
  }
  return kOk;
}

int cmd_verify(std::uint64_t seed, bool quick, std::ostream& out) {
  bool all = true;
  for (const oracle::CheckOutcome& c : oracle::run_equivalence_suite(seed, quick)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " trials=" << c.trials
        << " max_dev=" << format_double(c.max_deviation) << " tol=" << format_double(c.tolerance) << '\n';
    all = all && c.passed;
  }
  return all ? kOk : kNumericalFailure;
}

}  // namespace

std::vector<double> read_responses(const std::string& path, const std::string& column) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot read " + path);

  std::vector<double> values;
  std::optional<std::size_t> index;
  bool header_checked = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    std::string field = t;
    if (!column.empty()) {
      const std::vector<std::string> fields = split(t, ',');
      if (!header_checked) {
        header_checked = true;
        auto it = std::find(fields.begin(), fields.end(), column);
        if (it != fields.end()) {
          index = static_cast<std::size_t>(it - fields.begin());
          continue;
        }
        const auto as_number = parse_number(column);
        if (!as_number || *as_number < 0 || std::floor(*as_number) != *as_number) {
          throw Error(ErrorCode::InvalidConfig, "column '" + column + "' not found in header");
        }
        index = static_cast<std::size_t>(*as_number);
        // A header row that does not parse in the chosen column is skipped.
        if (*index < fields.size() && !parse_number(fields[*index])) continue;
      }
      if (*index >= fields.size()) {
        throw Error(ErrorCode::InvalidConfig, path + ":" + std::to_string(lineno) + ": missing column");
      }
      field = fields[*index];
    }
    const auto v = parse_number(field);
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorCode::NonFinite, path + ":" + std::to_string(lineno) + ": not a finite number: '" + field + "'");
    }
    values.push_back(*v);
  }
  if (values.empty()) throw Error(ErrorCode::EmptyInput, path + ": no responses");
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isotonic regression under adversarial sign corruption"};
  app.name("ascifit");
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Override the master seed");

  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a monotone signal to sign-corrupted responses");
  fit_cmd->add_option("input", fit_opts.input, "Responses: one per line, or CSV with --column")->required();
  fit_cmd->add_option("--eta", fit_opts.eta, "Known lower bound of the signal (> 0)")->required();
  fit_cmd->add_option("--sigma-floor", fit_opts.sigma_floor, "Lower clamp on sigma_hat");
  fit_cmd->add_option("--sigma-ceiling", fit_opts.sigma_ceiling, "Upper clamp on sigma_hat");
  fit_cmd->add_option("--tol", fit_opts.tol, "Tolerance on |G(sigma) - mean(T^2)|");
  fit_cmd->add_option("--column", fit_opts.column, "CSV column name or 0-based index");
  fit_cmd->add_option("--out", fit_opts.out, "Write estimates here instead of stdout");

  SimulateOptions sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the simulation grid");
  sim_cmd->add_option("--config", sim_opts.config, "SimConfig JSON (default: built-in grid)");
  sim_cmd->add_option("--out-dir", sim_opts.out_dir, "Directory for the CSV files");
  sim_cmd->add_option("--records", sim_opts.records, "Records file name");
  sim_cmd->add_option("--summary", sim_opts.summary, "Summary file name");
  sim_cmd->add_option("--parallelism", sim_opts.parallelism, "Worker threads (0: all cores)");
  sim_cmd->add_flag("--timing", sim_opts.timing, "Record wall-clock runtime_ms (breaks byte-reproducibility)");

  std::string summary_path;
  std::optional<double> rate_sigma;
  auto* rate_cmd = app.add_subcommand("rate-check", "Log-log slope of mean MSE against n");
  rate_cmd->add_option("summary", summary_path, "summary.csv from simulate")->required();
  rate_cmd->add_option("--sigma", rate_sigma, "Only this sigma");

  SampleOptions sample_opts;
  auto* sample_cmd = app.add_subcommand("sample", "Draw one Rademacher-corrupted sample on the linear signal");
  sample_cmd->add_option("--n", sample_opts.n, "Sample size");
  sample_cmd->add_option("--eta", sample_opts.eta, "Signal floor");
  sample_cmd->add_option("--sigma", sample_opts.sigma, "Noise scale");
  sample_cmd->add_option("--p", sample_opts.p, "Probability of keeping the sign");
  sample_cmd->add_option("--out", sample_opts.out, "Output CSV (default stdout)");

  bool quick = false;
  auto* verify_cmd = app.add_subcommand("verify", "");  // hidden: empty description
  verify_cmd->group("");
  verify_cmd->add_flag("--quick", quick, "Smaller trial counts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_opts, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sim_opts, seed, out, err);
    if (rate_cmd->parsed()) return cmd_rate_check(summary_path, rate_sigma, out);
    if (sample_cmd->parsed()) return cmd_sample(sample_opts, seed.value_or(1), out);
    if (verify_cmd->parsed()) return cmd_verify(seed.value_or(20220601), quick, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kNumericalFailure : kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ascifit::cli
