#pragma once
// Batch front end and the studies it drives. Exit codes: 0 pass, 1 check failure,
// 2 usage or config error, 3 numerical abort.
#include <cstdint>
#include <string>
#include <vector>

#include "bsq/config.hpp"
#include "bsq/diagnostics.hpp"
#include "bsq/harness.hpp"

namespace bsq::cli {

enum Exit { kPass = 0, kCheckFail = 1, kUsage = 2, kNumerical = 3 };

struct Verdict {
  std::string name;
  double margin = 0;  // worst lhs/rhs - 1 over the run (negative = slack)
  bool pass = true;
};

struct SimulationOutcome {
  DiagnosticsRecord record;
  std::vector<Verdict> verdicts;
  bool aborted = false;
  std::string abort_reason;
  int exit_code = kPass;
};
std::vector<Verdict> evaluate_checks(const DiagnosticsRecord& rec, const RunConfig& c);
// Runs the configured simulation; writes diagnostics.csv, diagnostics_extra.csv, verdicts.txt,
// growth.txt and snapshots into output.dir when write_files is set.
SimulationOutcome simulate(const RunConfig& c, bool write_files = true);
std::string verdicts_text(const std::vector<Verdict>& v, bool aborted, const std::string& reason);

// least-squares slope of log(err) against log(1/n)
double fit_order(const std::vector<int>& n, const std::vector<double>& err);

struct MmsStudy {
  std::vector<int> n;
  std::vector<double> err_omega, err_rho;
  double order_omega = 0, order_rho = 0;
  bool pass = false;  // both orders >= 1.9
  std::string table() const;
};
// Manufactured-solution study on R = 6, Lz = 2 pi, nr = nz = n, dt = 1/n, t in [0, 1].
MmsStudy mms_study(const std::vector<int>& resolutions, Scheme scheme = Scheme::CNAB2);

struct IdentityCheck {
  int n = 0;
  double box = 0, sigma = 0;
  double rel_l2 = 0;
};
// omega/r = exp(-(r^2 + z^2)/sigma^2) on a box of side L: free-space identity route against
// the meridian streamfunction route.
IdentityCheck identity_check(int n, double L, double sigma);

struct InequalitySuite {
  std::vector<StabilityResult> results;
  int n_lp = 0, n_identity = 0;
  double tol = 0.25;
  bool pass = true;
  std::string table() const;
};
// which: "all" or a comma list of harness names
InequalitySuite inequality_suite(int samples, std::uint64_t seed, const std::string& which, int n_lp, int n_identity,
                                 double tol = 0.25);

int run_main(int argc, char** argv);

}  // namespace bsq::cli
