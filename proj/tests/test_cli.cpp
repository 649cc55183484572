#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bsq/cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace bsq;

namespace {
struct Result {
  int code;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("bsq_cli_test_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// runs the CLI binary named by BSQ_CLI, capturing stdout and stderr together
Result run(const std::string& args) {
  const char* exe = std::getenv("BSQ_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "BSQ_CLI must name the bsq executable");
  const auto log = scratch() / "last.log";
  const int st = std::system((std::string(exe) + " " + args + " > " + log.string() + " 2>&1").c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(log)};
}

fs::path write_cfg(const std::string& name, const std::string& text) {
  auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

const std::string kSmall =
    "grid.nr = 16\ngrid.nz = 16\ngrid.R = 4\ngrid.Lz = 8\ntime.dt = 0.01\ntime.t_end = 0.1\n";
}  // namespace

TEST_CASE("simulate on the zero preset: exit 0 and all-zero diagnostics") {
  auto cfg = write_cfg("zero.cfg", kSmall + "init.kind = zero\n");
  auto out = scratch() / "zero";
  auto r = run("simulate " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 0);
  std::istringstream csv(slurp(out / "diagnostics.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("t,u_l2,", 0) == 0);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(line.substr(line.find(',')) == ",0,0,0,0,0,0,0,0,0,0,0,0,0");
  }
  CHECK(rows == 11);
  const auto verdicts = slurp(out / "verdicts.txt");
  CHECK(verdicts.find("FAIL") == std::string::npos);
  CHECK(verdicts.find("energy 0.000000e+00 PASS") != std::string::npos);
}

TEST_CASE("configuration errors exit 2 and name the problem") {
  auto r = run("simulate " + write_cfg("nx.cfg", kSmall + "grid.nx = 32\n").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("grid.nx") != std::string::npos);
  r = run("simulate " + write_cfg("dup.cfg", kSmall + "grid.nr = 32\n").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("grid.nr") != std::string::npos);
  r = run("simulate " + write_cfg("val.cfg", kSmall + "time.scheme = euler\n").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("time.scheme") != std::string::npos);
  CHECK(run("simulate " + (scratch() / "missing.cfg").string()).code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("lp-analyze " + (scratch() / "missing.axbq").string()).code == 2);
  auto junk = scratch() / "junk.axbq";
  std::ofstream(junk) << "not a snapshot";
  CHECK(run("lp-analyze " + junk.string()).code == 2);
}

TEST_CASE("numerical abort exits 3 and records the reason") {
  auto cfg = write_cfg("cfl.cfg",
                       "grid.nr = 16\ngrid.nz = 16\ngrid.R = 4\ngrid.Lz = 8\ntime.dt = 5\ntime.t_end = 50\n"
                       "init.kind = vortex_ring\ninit.r0 = 1\ninit.amplitude = 50\n");
  auto out = scratch() / "cfl";
  auto r = run("simulate " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 3);
  const auto verdicts = slurp(out / "verdicts.txt");
  CHECK(verdicts.find("run nan FAIL") != std::string::npos);
  CHECK(fs::exists(out / "abort_dump.axbq"));
}

TEST_CASE("a failing check maps to exit 1") {
  RunConfig c;
  DiagnosticsRecord rec;
  rec.append(DiagnosticsRow{.t = 0, .u_l2 = 1});
  rec.append(DiagnosticsRow{.t = 1, .u_l2 = 1.1});
  auto v = cli::evaluate_checks(rec, c);
  bool any_fail = false;
  for (const auto& x : v) any_fail |= !x.pass;
  CHECK(any_fail);
  CHECK(cli::verdicts_text(v, false, "").find("energy 2.100000e-01 FAIL") != std::string::npos);
}

TEST_CASE("verify-identity at n = 32 is regression locked") {
  auto r = run("verify-identity --n 32");
  CHECK(r.code == 0);
  CHECK(r.out.find("relative_l2_error = 3.413129e-07") != std::string::npos);
  CHECK(run("verify-identity --n 32 --tol 1e-9").code == 1);
}

TEST_CASE("determinism: identical configs give byte-identical diagnostics") {
  auto cfg = write_cfg("det.cfg", kSmall + "init.kind = combined\ninit.r0 = 1\n");
  auto a = scratch() / "det_a", b = scratch() / "det_b";
  CHECK(run("simulate " + cfg.string() + " --out " + a.string()).code == 0);
  CHECK(run("simulate " + cfg.string() + " --out " + b.string()).code == 0);
  const auto da = slurp(a / "diagnostics.csv");
  CHECK(!da.empty());
  CHECK(da == slurp(b / "diagnostics.csv"));
  CHECK(slurp(a / "verdicts.txt") == slurp(b / "verdicts.txt"));
}

TEST_CASE("convergence, verify-inequalities and lp-analyze subcommands") {
  auto r = run("convergence --resolutions 16,32");
  CHECK(r.code == 0);
  CHECK(r.out.find("order") != std::string::npos);

  auto csv = scratch() / "ratios.csv";
  r = run("verify-inequalities --samples 3 --which interpolation --n 16 --out " + csv.string());
  CHECK(r.code == 0);
  CHECK(slurp(csv).rfind("lemma,sample_seed,lhs,rhs,ratio\ninterpolation,", 0) == 0);
  CHECK(fs::exists(scratch() / "ratios_fine.csv"));

  auto cfg = write_cfg("snap.cfg", kSmall + "init.kind = combined\ninit.r0 = 1\noutput.snapshot_every = 5\n");
  auto out = scratch() / "snap";
  REQUIRE(run("simulate " + cfg.string() + " --out " + out.string()).code == 0);
  r = run("lp-analyze " + (out / "snap_000005.axbq").string() + " --n 16");
  CHECK(r.code == 0);
  CHECK(r.out.find("B^0_{2,2}") != std::string::npos);
}

TEST_CASE("example configurations parse") {
  RunConfig c = parse_config(to_text(RunConfig{}));
  CHECK(c.grid.nr == 128);
  CHECK(config_keys().size() == 22);
  CHECK_THROWS_AS(parse_config("grid.nr = 12\n"), ConfigError);
  for (const auto& k : config_keys()) CHECK(to_text(RunConfig{}).find(k + " = ") != std::string::npos);
}
