#pragma once
#include <optional>
#include <string>
#include <vector>

#include "bsq/fields.hpp"

namespace bsq {

struct DiagnosticsRow {
  // diagnostics.csv columns, in order
  double t = 0, u_l2 = 0, grad_h_u_l2 = 0, rho_l2 = 0, rho_linf = 0, omega_l2 = 0, omega_over_r_l2 = 0,
         grad_h_omega_over_r_l2 = 0, gamma_l2 = 0, dz_rho_l2 = 0, dz_omega_l2 = 0, grad_u_linf = 0,
         omega_Lnorm = 0, cfl = 0;
  // diagnostics_extra.csv
  double grad_h_rho_l2 = 0, gamma_l4 = 0, gamma_linf = 0;
  // trapezoid integrals over recorded times (recomputed on append)
  double int_grad_h_u_sq = 0, int_grad_h_rho_sq = 0, int_grad_h_omega_over_r_sq = 0, int_grad_u_linf = 0;
};

struct AbortInfo {
  long step = 0;
  double t = 0;
  std::string reason;
};

struct DiagnosticsRecord {
  std::vector<DiagnosticsRow> rows;
  std::optional<AbortInfo> abort;  // set when a run terminated on a numerical error
  void append(DiagnosticsRow row);  // fills the running integrals; t must increase
  bool empty() const { return rows.empty(); }
};

// Gamma = omega_theta / r - rho / 2
ScalarField2D gamma_field(const ScalarField2D& omega_theta, const ScalarField2D& rho);

// sup over integer p in [2, p_max] of ||f||_p / p, cylindrical measure
double l_norm_surrogate(const ScalarField2D& f, int p_max = 32);

DiagnosticsRow measure(double t, const ScalarField2D& omega_theta, const ScalarField2D& rho,
                       const VelocityField2D& u, double cfl);

struct CheckRow {
  double t = 0, lhs = 0, rhs = 0;
  double excess = 0;  // lhs/rhs - 1 (negative = slack)
  bool pass = true;
};

struct CheckReport {
  std::string name;
  double tol = 0;
  std::vector<CheckRow> rows;
  bool pass = true;
  double worst_excess = -1;  // max over rows after the initial one
  double violation() const { return worst_excess > 0 ? worst_excess : 0.0; }
};

CheckReport check_energy(const DiagnosticsRecord& rec, double tol = 1e-3);
// L2 budget and L-infinity maximum principle for rho
struct DensityReport {
  CheckReport l2, linf;
  bool pass() const { return l2.pass && linf.pass; }
};
DensityReport check_density(const DiagnosticsRecord& rec, double tol_l2 = 1e-3, double tol_linf = 1e-2);
CheckReport check_omega_over_r(const DiagnosticsRecord& rec, double tol = 1e-2);
CheckReport check_gamma(const DiagnosticsRecord& rec, double tol = 1e-3);

struct GrowthEntry {
  std::string name;
  bool finite = true;
  double max_value = 0;
  double envelope_c = 0;  // least C with Q(t) <= C exp(exp(C (t - t0)))
};
struct GrowthReport {
  std::vector<GrowthEntry> entries;
  bool all_finite = true;
  std::optional<AbortInfo> abort;
  std::string text() const;
};
GrowthReport growth_report(const DiagnosticsRecord& rec);

extern const char* const kDiagnosticsHeader;
extern const char* const kDiagnosticsExtraHeader;
std::string to_csv(const DiagnosticsRecord& rec);
std::string extra_to_csv(const DiagnosticsRecord& rec);
// extra may be empty; integrals are recomputed from the rows
DiagnosticsRecord from_csv(const std::string& main_csv, const std::string& extra_csv = "");

}  // namespace bsq
