#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace ascifit;

namespace {

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ascifit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  return lines(std::string(std::istreambuf_iterator<char>(in), {})).size();
}

std::vector<double> column(const std::vector<std::string>& rows, std::size_t col) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream is(rows[i]);
    std::string field;
    for (std::size_t c = 0; c <= col; ++c) std::getline(is, field, ',');
    out.push_back(std::stod(field));
  }
  return out;
}

}  // namespace

TEST_CASE("cli fit: three responses with unicode minus", "[cli]") {
  const fs::path dir = temp_dir("fit");
  const fs::path input = write_file(dir / "r.txt", "−1\n2\n−3\n");
  const auto res = invoke({"fit", input.string(), "--eta", "0.2"});
  REQUIRE(res.status == cli::kOk);
  const auto rows = lines(res.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "i,r,t_hat,mu_naive,mu_hat,sigma_hat");
  const auto r = column(rows, 1);
  CHECK(r == std::vector<double>{-1.0, 2.0, -3.0});
  const auto mu_hat = column(rows, 4);
  CHECK(std::is_sorted(mu_hat.begin(), mu_hat.end()));
  for (double m : mu_hat) CHECK(m >= 0.2);
  CHECK(res.err.find("bracket_valid") != std::string::npos);
}

TEST_CASE("cli fit: csv column and output file", "[cli]") {
  const fs::path dir = temp_dir("fit_csv");
  const fs::path input = write_file(dir / "d.csv", "x,y\n# comment\n1,0.5\n2,-1.5\n\n3,2.5\n");
  const fs::path out = dir / "fit.csv";
  const auto res = invoke({"fit", input.string(), "--eta", "0.1", "--column", "y", "--out", out.string()});
  REQUIRE(res.status == cli::kOk);
  CHECK(res.out.empty());
  CHECK(count_lines(out) == 4);
  CHECK(invoke({"fit", input.string(), "--eta", "0.1", "--column", "1"}).status == cli::kOk);
  CHECK(invoke({"fit", input.string(), "--eta", "0.1", "--column", "z"}).status == cli::kInputError);
}

TEST_CASE("cli fit: input errors exit 1", "[cli]") {
  const fs::path dir = temp_dir("fit_bad");
  const fs::path good = write_file(dir / "good.txt", "1\n2\n");
  const fs::path bad = write_file(dir / "bad.txt", "1\nabc\n");
  const fs::path empty = write_file(dir / "empty.txt", "# nothing\n");
  CHECK(invoke({"fit", good.string()}).status == cli::kInputError);
  CHECK(invoke({"fit", bad.string(), "--eta", "0.2"}).status == cli::kInputError);
  CHECK(invoke({"fit", empty.string(), "--eta", "0.2"}).status == cli::kInputError);
  CHECK(invoke({"fit", (dir / "missing.txt").string(), "--eta", "0.2"}).status == cli::kInputError);
  CHECK(invoke({"fit", good.string(), "--eta", "-1"}).status == cli::kInputError);
  CHECK(invoke({"fit", good.string(), "--eta", "0.2", "--sigma-floor", "3", "--sigma-ceiling", "1"}).status ==
        cli::kInputError);
  CHECK(invoke({"nonsense"}).status == cli::kInputError);
  CHECK(invoke({}).status == cli::kInputError);
}

TEST_CASE("cli simulate and rate-check", "[cli]") {
  const fs::path dir = temp_dir("sim");
  const fs::path config = write_file(dir / "cfg.json", R"({"reps": 3, "ns": [100, 200, 400], "sigmas": [0.5, 1.0]})");
  const auto res = invoke({"simulate", "--config", config.string(), "--out-dir", dir.string()});
  REQUIRE(res.status == cli::kOk);
  CHECK(count_lines(dir / "records.csv") == 1 + 2 * 3 * 3);
  CHECK(count_lines(dir / "summary.csv") == 1 + 2 * 3);

  const auto rc = invoke({"rate-check", (dir / "summary.csv").string()});
  REQUIRE(rc.status == cli::kOk);
  const auto rows = lines(rc.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "eta,p,sigma,slope,intercept,max_abs_residual,points");
  const auto one = invoke({"rate-check", (dir / "summary.csv").string(), "--sigma", "1"});
  CHECK(lines(one.out).size() == 2);

  CHECK(invoke({"simulate", "--config", (dir / "missing.json").string(), "--out-dir", dir.string()}).status ==
        cli::kInputError);
  CHECK(invoke({"rate-check", (dir / "records.csv").string()}).status == cli::kInputError);
}

TEST_CASE("cli simulate: output does not depend on parallelism", "[cli]") {
  const fs::path dir = temp_dir("sim_par");
  const fs::path config = write_file(dir / "cfg.json", R"({"reps": 2, "ns": [60, 90, 120], "sigmas": [1.0]})");
  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  REQUIRE(invoke({"simulate", "--config", config.string(), "--out-dir", (dir / "a").string(), "--parallelism", "1"})
              .status == cli::kOk);
  REQUIRE(invoke({"simulate", "--config", config.string(), "--out-dir", (dir / "b").string(), "--parallelism", "4"})
              .status == cli::kOk);
  CHECK(read(dir / "a" / "records.csv") == read(dir / "b" / "records.csv"));
  CHECK(read(dir / "a" / "summary.csv") == read(dir / "b" / "summary.csv"));
}

TEST_CASE("cli sample: seeded and reproducible", "[cli]") {
  const auto a = invoke({"--seed", "5", "sample", "--n", "20", "--eta", "0.2", "--sigma", "1", "--p", "0.5"});
  const auto b = invoke({"--seed", "5", "sample", "--n", "20", "--eta", "0.2", "--sigma", "1", "--p", "0.5"});
  REQUIRE(a.status == cli::kOk);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 21);
  CHECK(invoke({"sample", "--n", "20", "--eta", "2", "--sigma", "1", "--p", "0.5"}).status == cli::kInputError);
}

TEST_CASE("cli verify --quick passes", "[cli]") {
  const auto res = invoke({"verify", "--quick"});
  CHECK(res.status == cli::kOk);
  CHECK(res.out.find("FAIL") == std::string::npos);
}
