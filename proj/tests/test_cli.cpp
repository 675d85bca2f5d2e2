#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ALBUMSIM_CLI_PATH
#error "ALBUMSIM_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / ("albumsim_out_" + std::to_string(++counter) + ".txt");
  const fs::path err = dir / ("albumsim_err_" + std::to_string(counter) + ".txt");
  const std::string cmd = std::string(ALBUMSIM_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return result;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  const auto sub = run_cli("simulate --help");
  CHECK(sub.exit_code == 0);
  CHECK(sub.out.find("--album-size") != std::string::npos);
}

TEST_CASE("bad arguments exit with the usage code") {
  CHECK(run_cli("simulate --album-size 0 --runs 10 --seed 1").exit_code == 2);
  CHECK(run_cli("simulate --album-size 10 --runs 10").exit_code == 2);        // missing --seed
  CHECK(run_cli("simulate --album-size 10 --seed 1").exit_code == 2);         // missing --runs
  CHECK(run_cli("simulate --album-size 10 --runs 10 --seed 1 --bogus 3").exit_code == 2);
  CHECK(run_cli("nosuchcommand").exit_code == 2);
  const auto r = run_cli("simulate --album-size 100 --pack-size 101 --runs 10 --seed 1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("duplicate-free") != std::string::npos);
}

TEST_CASE("analytic subcommand prints exact and approximate values") {
  const auto r = run_cli("analytic --album-size 640 --replacement 50");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("exact factor") != std::string::npos);
  CHECK(r.out.find("2.627570") != std::string::npos);  // approx ln(B/K)+K/B
}

TEST_CASE("simulate subcommand reports a summary") {
  const auto r = run_cli(
      "simulate --album-size 640 --pack-size 5 --replacement 50 --collectors 3 "
      "--runs 200 --seed 7 --threads 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("factor f mean") != std::string::npos);
  CHECK(r.out.find("K_eff=50") != std::string::npos);
}

TEST_CASE("estimate subcommand reproduces the worked costs") {
  const auto r = run_cli(
      "estimate --album-size 640 --pack-size 5 --replacement 50 --collectors 3 "
      "--pack-price 0.60 --sticker-price 0.18 --factor 1.58 --sigma-norm 2.73");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("124.34") != std::string::npos);
  CHECK(r.out.find("8.29") != std::string::npos);
  CHECK(r.out.find("[107.77, 140.92]") != std::string::npos);
}

TEST_CASE("table subcommand writes deterministic csv across thread counts") {
  const fs::path a = temp_file("albumsim_t1.csv");
  const fs::path b = temp_file("albumsim_t2.csv");
  const fs::path c = temp_file("albumsim_t3.csv");
  const std::string base =
      "table --album-size 40 --collectors 1,2 --percentages 10,20 --runs 300 --seed 11 ";
  CHECK(run_cli(base + "--threads 1 --out " + a.string()).exit_code == 0);
  CHECK(run_cli(base + "--threads 1 --out " + b.string()).exit_code == 0);
  CHECK(run_cli(base + "--threads 2 --out " + c.string()).exit_code == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text == slurp(c));
  CHECK(text.substr(0, text.find('\n')) ==
        "F,pct,f_mean,f_halfwidth,sigma_norm,n_runs,B,P,model,seed");
  fs::remove(a);
  fs::remove(b);
  fs::remove(c);
}

TEST_CASE("estimate interpolates from a generated table and honors its range") {
  const fs::path table = temp_file("albumsim_est.csv");
  CHECK(run_cli("table --album-size 100 --collectors 1,3 --percentages 8,12 --runs 400 "
                "--seed 21 --threads 2 --out " + table.string()).exit_code == 0);
  const std::string base =
      "estimate --album-size 100 --pack-size 1 --replacement 10 --collectors 3 "
      "--pack-price 0.12 --sticker-price 0.18 --factor-table " + table.string();
  const auto ok = run_cli(base);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("factor from table") != std::string::npos);

  const auto out_of_range = run_cli(base + " --percent 30");
  CHECK(out_of_range.exit_code == 3);
  CHECK(out_of_range.err.find("error:") != std::string::npos);

  const auto missing = run_cli(
      "estimate --album-size 100 --pack-size 1 --replacement 10 --collectors 3 "
      "--pack-price 0.12 --sticker-price 0.18 --factor-table /nonexistent/t.csv");
  CHECK(missing.exit_code == 1);
  fs::remove(table);
}

TEST_CASE("verify subcommand runs the oracle suite") {
  const auto r = run_cli("verify --runs 5000 --seed 1 --threads 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
