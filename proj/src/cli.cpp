#include "bsq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "bsq/harmonic.hpp"
#include "bsq/lp.hpp"
#include "bsq/oracle.hpp"
#include "bsq/solver.hpp"

namespace bsq::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream o(p, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write " + p.string());
  o << s;
}

bool enabled(const RunConfig& c, const std::string& name) {
  for (const auto& k : c.verify.checks)
    if (k == name) return true;
  return false;
}

}  // namespace

std::vector<Verdict> evaluate_checks(const DiagnosticsRecord& rec, const RunConfig& c) {
  std::vector<Verdict> v;
  if (rec.empty()) return v;
  auto add = [&](const CheckReport& r) { v.push_back({r.name, r.worst_excess, r.pass}); };
  if (enabled(c, "energy")) add(check_energy(rec, c.verify.energy_tol));
  if (enabled(c, "density")) {
    const auto d = check_density(rec, c.verify.density_l2_tol, c.verify.density_linf_tol);
    add(d.l2);
    add(d.linf);
  }
  if (enabled(c, "omega_over_r")) add(check_omega_over_r(rec, c.verify.omega_over_r_tol));
  if (enabled(c, "gamma")) add(check_gamma(rec, c.verify.gamma_tol));
  return v;
}

std::string verdicts_text(const std::vector<Verdict>& v, bool aborted, const std::string& reason) {
  std::ostringstream o;
  for (const auto& x : v) o << x.name << " " << fmt("%.6e", x.margin) << " " << (x.pass ? "PASS" : "FAIL") << "\n";
  if (aborted) o << "run nan FAIL " << reason << "\n";
  return o.str();
}

SimulationOutcome simulate(const RunConfig& c, bool write_files) {
  SimulationOutcome out;
  const fs::path dir(c.output.dir);
  if (write_files) fs::create_directories(dir);
  StepConfig sc;
  sc.dt = c.time.dt;
  sc.scheme = c.time.scheme;
  sc.dealias = c.time.dealias;
  RunOptions opt;
  opt.observe_every = c.output.observe_every;
  if (write_files) {
    opt.snapshot_every = c.output.snapshot_every;
    opt.snapshot_dir = dir.string();
    opt.dump_path = (dir / "abort_dump.axbq").string();
  }
  const auto init = initial_state(c);
  try {
    out.record = run(init, sc, c.time.t_end, opt);
  } catch (const RunError& e) {
    out.record = e.record;
    out.aborted = true;
    out.abort_reason = e.what();
  }
  out.verdicts = evaluate_checks(out.record, c);
  out.exit_code = kPass;
  for (const auto& v : out.verdicts)
    if (!v.pass) out.exit_code = kCheckFail;
  if (out.aborted) out.exit_code = kNumerical;
  if (write_files) {
    write_file(dir / "diagnostics.csv", to_csv(out.record));
    write_file(dir / "diagnostics_extra.csv", extra_to_csv(out.record));
    write_file(dir / "verdicts.txt", verdicts_text(out.verdicts, out.aborted, out.abort_reason));
    write_file(dir / "growth.txt", growth_report(out.record).text());
  }
  return out;
}

double fit_order(const std::vector<int>& n, const std::vector<double>& err) {
  const size_t m = n.size();
  double xm = 0, ym = 0;
  for (size_t i = 0; i < m; ++i) {
    xm += std::log(static_cast<double>(n[i]));
    ym += std::log(err[i]);
  }
  xm /= m;
  ym /= m;
  double num = 0, den = 0;
  for (size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(n[i])) - xm;
    num += x * (std::log(err[i]) - ym);
    den += x * x;
  }
  return -num / den;
}

std::string MmsStudy::table() const {
  std::ostringstream o;
  o << "n      err_omega               err_rho\n";
  for (size_t i = 0; i < n.size(); ++i)
    o << n[i] << "  " << fmt("%.6e", err_omega[i]) << "  " << fmt("%.6e", err_rho[i]) << "\n";
  o << "order  " << fmt("%.4f", order_omega) << "  " << fmt("%.4f", order_rho) << "\n";
  return o.str();
}

MmsStudy mms_study(const std::vector<int>& resolutions, Scheme scheme) {
  if (resolutions.size() < 2) throw std::invalid_argument("mms_study: need at least two resolutions");
  oracle::ManufacturedSolution ms;
  MmsStudy st;
  st.n = resolutions;
  for (int n : resolutions) {
    const auto g = make_grid(n, n, 6.0, 2.0 * std::numbers::pi);
    StepConfig sc;
    sc.dt = 1.0 / n;
    sc.scheme = scheme;
    sc.forcing_omega = ms.omega_forcing_on(g);
    sc.forcing_rho = ms.rho_forcing_on(g);
    auto s = make_state(0.0, ms.omega_on(g, 0.0), ms.rho_on(g, 0.0));
    for (int k = 0; k < n; ++k) s = step(s, sc);
    const auto ew = ms.omega_on(g, s.t), er = ms.rho_on(g, s.t);
    st.err_omega.push_back(lp_norm(axpy(-1.0, ew, s.omega_theta), 2.0) / lp_norm(ew, 2.0));
    st.err_rho.push_back(lp_norm(axpy(-1.0, er, s.rho), 2.0) / lp_norm(er, 2.0));
  }
  st.order_omega = fit_order(st.n, st.err_omega);
  st.order_rho = fit_order(st.n, st.err_rho);
  st.pass = st.order_omega >= 1.9 && st.order_rho >= 1.9;
  return st;
}

IdentityCheck identity_check(int n, double L, double sigma) {
  const auto box = make_box(n, L);
  const double s2 = sigma * sigma;
  auto g = [s2](double r, double z) { return std::exp(-(r * r + z * z) / s2); };
  IdentityEvaluator ev(box, Domain::FreeSpace);
  const auto a = ev.ur_over_r(sample_axisymmetric(box, g));
  const auto b = ur_over_r_meridian(box, g);
  return {n, L, sigma, relative_l2(a, b)};
}

std::string InequalitySuite::table() const {
  std::ostringstream o;
  o << "harness              max_ratio(n)   max_ratio(2n)  rel_change  skipped  verdict\n";
  for (const auto& r : results) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %-14.6e %-14.6e %-11.4f %-8d %s\n", r.coarse.lemma.c_str(),
                  r.coarse.max_ratio, r.fine.max_ratio, r.rel_change, r.coarse.skipped + r.fine.skipped,
                  r.stable(tol) ? "PASS" : "FAIL");
    o << buf;
  }
  return o.str();
}

InequalitySuite inequality_suite(int samples, std::uint64_t seed, const std::string& which, int n_lp, int n_identity,
                                 double tol) {
  InequalitySuite suite;
  suite.n_lp = n_lp;
  suite.n_identity = n_identity;
  suite.tol = tol;
  auto wanted = [&](const std::string& name) {
    if (which == "all") return true;
    std::stringstream ss(which);
    std::string item;
    while (std::getline(ss, item, ','))
      if (item == name) return true;
    return false;
  };
  const double two_pi = 2.0 * std::numbers::pi;
  for (auto w : {LpInequality::Trilinear, LpInequality::TrilinearAniso, LpInequality::Sharp, LpInequality::LinfHalpha,
                 LpInequality::Interp, LpInequality::Algebra}) {
    if (!wanted(to_string(w))) continue;
    InequalityParams prm;
    prm.n_gen = n_lp / 2;
    auto c = inequality_harness(w, samples, seed, make_box(n_lp, two_pi), prm);
    auto f = inequality_harness(w, samples, seed, make_box(2 * n_lp, two_pi), prm);
    suite.results.push_back(compare_resolutions(std::move(c), std::move(f)));
  }
  for (auto w : {IdentityLemma::UrSup, IdentityLemma::DzUr, IdentityLemma::UrL6, IdentityLemma::DrOverR,
                 IdentityLemma::KernelBound}) {
    if (!wanted(to_string(w))) continue;
    auto c = identity_harness(w, samples, seed, make_box(n_identity, 12.0));
    auto f = identity_harness(w, samples, seed, make_box(2 * n_identity, 12.0));
    suite.results.push_back(compare_resolutions(std::move(c), std::move(f)));
  }
  if (suite.results.empty()) throw std::invalid_argument("no harness matches '" + which + "'");
  for (const auto& r : suite.results) suite.pass = suite.pass && r.stable(tol);
  return suite;
}

namespace {

int cmd_simulate(const std::string& path, const std::string& out_override) {
  auto c = load_config(path);
  if (!out_override.empty()) c.output.dir = out_override;
  const auto o = simulate(c, true);
  std::cout << verdicts_text(o.verdicts, o.aborted, o.abort_reason);
  if (o.aborted) std::cerr << "numerical abort: " << o.abort_reason << "\n";
  return o.exit_code;
}

int cmd_verify_identity(int n, double L, double sigma, double tol) {
  const auto r = identity_check(n, L, sigma);
  std::cout << "n = " << n << "  box = " << L << "  sigma = " << sigma << "\n"
            << "relative_l2_error = " << fmt("%.6e", r.rel_l2) << "\n";
  const bool ok = std::isfinite(r.rel_l2) && r.rel_l2 <= tol;
  std::cout << (ok ? "PASS" : "FAIL") << " (tolerance " << fmt("%.1e", tol) << ")\n";
  return ok ? kPass : kCheckFail;
}

int cmd_verify_inequalities(int samples, std::uint64_t seed, const std::string& which, int n, int n_id,
                            const std::string& out) {
  const auto s = inequality_suite(samples, seed, which, n, n_id);
  std::cout << s.table();
  if (!out.empty()) {
    std::string coarse = harness_csv_header(), fine = harness_csv_header();
    for (const auto& r : s.results) {
      coarse += harness_csv_rows(r.coarse);
      fine += harness_csv_rows(r.fine);
    }
    const fs::path p(out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_file(p, coarse);
    fs::path pf = p;
    pf.replace_filename(p.stem().string() + "_fine" + p.extension().string());
    write_file(pf, fine);
  }
  std::cout << (s.pass ? "PASS" : "FAIL") << "\n";
  return s.pass ? kPass : kCheckFail;
}

int cmd_lp_analyze(const std::string& path, const std::string& field, int n, int jmax) {
  const auto snap = read_snapshot(path);
  if (field != "omega" && field != "rho") throw CLI::ValidationError("--field", "must be omega or rho");
  const auto f = lift_to_box(field == "omega" ? snap.omega : snap.rho, n);
  if (jmax <= 0) {
    const double kmax = std::sqrt(3.0) * std::numbers::pi * n / f.box.L;
    jmax = std::max(1, static_cast<int>(std::ceil(std::log2(kmax))));
  }
  const auto bank = make_bank(jmax);
  const auto s = to_spectral(f);
  std::cout << "snapshot t = " << fmt("%.6g", snap.t) << "  field = " << field << "  box n = " << n
            << "  L = " << fmt("%.6g", f.box.L) << "  jmax = " << jmax << "\n";
  std::cout << "j   ||Delta_j f||_2\n";
  for (int j = -1; j <= jmax; ++j)
    std::cout << j << "   " << fmt("%.6e", coeff_l2(dyadic_block(s, j, Direction::Full, bank))) << "\n";
  std::cout << "B^0_{2,2}      " << fmt("%.6e", besov_norm(s, {0, 0, 2, 2}, false, bank)) << "\n"
            << "B^1_{2,2}      " << fmt("%.6e", besov_norm(s, {1, 0, 2, 2}, false, bank)) << "\n"
            << "B^{1,1}_{2,2}  " << fmt("%.6e", besov_norm(s, {1, 1, 2, 2}, true, bank)) << "\n"
            << "H^{1,1}        " << fmt("%.6e", sobolev_norm(s, 1, 1)) << "\n"
            << "L              " << fmt("%.6e", special_norm(f, SpecialNorm::L, 32, bank)) << "\n"
            << "sqrtL          " << fmt("%.6e", special_norm(f, SpecialNorm::SqrtL, 32, bank)) << "\n"
            << "LogLip         " << fmt("%.6e", special_norm(f, SpecialNorm::LogLip, 32, bank)) << "\n";
  return kPass;
}

int cmd_convergence(const std::string& study, const std::vector<int>& res, const std::string& scheme) {
  if (study != "mms") throw CLI::ValidationError("--study", "only 'mms' is available");
  Scheme sc = Scheme::CNAB2;
  if (scheme == "rk3imex")
    sc = Scheme::RK3IMEX;
  else if (scheme != "cnab2")
    throw CLI::ValidationError("--scheme", "must be cnab2 or rk3imex");
  const auto st = mms_study(res, sc);
  std::cout << st.table() << (st.pass ? "PASS" : "FAIL") << " (order >= 1.9 required)\n";
  return st.pass ? kPass : kCheckFail;
}

}  // namespace

int run_main(int argc, char** argv) {
  apply_thread_cap_from_env();
  CLI::App app{"Axisymmetric Boussinesq solver and verification suite"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "run a configured simulation and its estimate checks");
  sim->add_option("config", cfg_path, "config file (section.key = value)")->required();
  sim->add_option("--out", out_dir, "override output.dir");

  int id_n = 32;
  double id_L = 12.0, id_sigma = 1.0, id_tol = 1e-5;
  auto* vid = app.add_subcommand("verify-identity", "cross-check the u^r/r identity against the streamfunction route");
  vid->add_option("--n", id_n, "box points per axis")->check(CLI::Range(8, 512));
  vid->add_option("--box-size", id_L, "box side length");
  vid->add_option("--sigma", id_sigma, "Gaussian width of omega/r");
  vid->add_option("--tol", id_tol, "relative L2 tolerance");

  int in_samples = 50, in_n = 32, in_nid = 32;
  std::uint64_t in_seed = 1;
  std::string in_which = "all", in_out = "ratios.csv";
  auto* vin = app.add_subcommand("verify-inequalities", "empirical constants and their stability under refinement");
  vin->add_option("--samples", in_samples)->check(CLI::PositiveNumber);
  vin->add_option("--seed", in_seed);
  vin->add_option("--which", in_which, "all, or a comma list of harness names");
  vin->add_option("--n", in_n, "coarse box size for the LP harnesses");
  vin->add_option("--n-identity", in_nid, "coarse box size for the identity harnesses");
  vin->add_option("--out", in_out, "CSV path; the refined run goes to <stem>_fine<ext>");

  std::string lp_path, lp_field = "omega";
  int lp_n = 64, lp_jmax = 0;
  auto* lpa = app.add_subcommand("lp-analyze", "dyadic spectrum and Besov/special norms of a snapshot");
  lpa->add_option("snapshot", lp_path)->required()->check(CLI::ExistingFile);
  lpa->add_option("--field", lp_field, "omega or rho");
  lpa->add_option("--n", lp_n, "box points per axis");
  lpa->add_option("--jmax", lp_jmax, "highest dyadic level (0 = automatic)");

  std::string cv_study = "mms", cv_scheme = "cnab2";
  std::vector<int> cv_res{32, 64, 128};
  auto* cnv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  cnv->add_option("--study", cv_study);
  cnv->add_option("--resolutions", cv_res)->delimiter(',');
  cnv->add_option("--scheme", cv_scheme, "cnab2 or rk3imex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  try {
    if (*sim) return cmd_simulate(cfg_path, out_dir);
    if (*vid) return cmd_verify_identity(id_n, id_L, id_sigma, id_tol);
    if (*vin) return cmd_verify_inequalities(in_samples, in_seed, in_which, in_n, in_nid, in_out);
    if (*lpa) return cmd_lp_analyze(lp_path, lp_field, lp_n, lp_jmax);
    if (*cnv) return cmd_convergence(cv_study, cv_res, cv_scheme);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace bsq::cli
