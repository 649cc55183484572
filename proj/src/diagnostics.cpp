#include "bsq/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace bsq {

const char* const kDiagnosticsHeader =
    "t,u_l2,grad_h_u_l2,rho_l2,rho_linf,omega_l2,omega_over_r_l2,grad_h_omega_over_r_l2,gamma_l2,dz_rho_l2,"
    "dz_omega_l2,grad_u_linf,omega_Lnorm,cfl";
const char* const kDiagnosticsExtraHeader = "t,grad_h_rho_l2,gamma_l4,gamma_linf";

void DiagnosticsRecord::append(DiagnosticsRow row) {
  if (!rows.empty()) {
    const auto& p = rows.back();
    if (!(row.t > p.t)) throw std::invalid_argument("DiagnosticsRecord: time must increase");
    const double h = 0.5 * (row.t - p.t);
    auto sq = [](double x) { return x * x; };
    row.int_grad_h_u_sq = p.int_grad_h_u_sq + h * (sq(p.grad_h_u_l2) + sq(row.grad_h_u_l2));
    row.int_grad_h_rho_sq = p.int_grad_h_rho_sq + h * (sq(p.grad_h_rho_l2) + sq(row.grad_h_rho_l2));
    row.int_grad_h_omega_over_r_sq =
        p.int_grad_h_omega_over_r_sq + h * (sq(p.grad_h_omega_over_r_l2) + sq(row.grad_h_omega_over_r_l2));
    row.int_grad_u_linf = p.int_grad_u_linf + h * (p.grad_u_linf + row.grad_u_linf);
  } else {
    row.int_grad_h_u_sq = row.int_grad_h_rho_sq = row.int_grad_h_omega_over_r_sq = row.int_grad_u_linf = 0.0;
  }
  rows.push_back(row);
}

ScalarField2D gamma_field(const ScalarField2D& omega, const ScalarField2D& rho) {
  require_same_grid(omega, rho);
  return axpy(-0.5, rho, divide_by_r(omega));
}

double l_norm_surrogate(const ScalarField2D& f, int p_max) {
  double best = 0.0;
  for (int p = 2; p <= p_max; ++p) best = std::max(best, lp_norm(f, p) / p);
  return best;
}

DiagnosticsRow measure(double t, const ScalarField2D& omega, const ScalarField2D& rho, const VelocityField2D& u,
                       double cfl) {
  DiagnosticsRow d;
  d.t = t;
  d.cfl = cfl;
  auto drur = d_r(u.ur), dzur = d_z(u.ur), druz = d_r(u.uz), dzuz = d_z(u.uz);
  auto uror = divide_by_r(u.ur);
  auto l2 = [](const ScalarField2D& f) { return lp_norm(f, 2.0); };
  d.u_l2 = std::hypot(l2(u.ur), l2(u.uz));
  d.grad_h_u_l2 = std::sqrt(inner(drur, drur) + inner(uror, uror) + inner(druz, druz));
  d.rho_l2 = l2(rho);
  d.rho_linf = max_abs(rho);
  d.omega_l2 = l2(omega);
  auto wor = divide_by_r(omega);
  d.omega_over_r_l2 = l2(wor);
  d.grad_h_omega_over_r_l2 = l2(d_r(wor));
  auto gam = axpy(-0.5, rho, wor);
  d.gamma_l2 = l2(gam);
  d.gamma_l4 = lp_norm(gam, 4.0);
  d.gamma_linf = max_abs(gam);
  d.dz_rho_l2 = l2(d_z(rho));
  d.dz_omega_l2 = l2(d_z(omega));
  double m = 0.0;
  for (size_t k = 0; k < drur.v.size(); ++k) {
    const double s = drur.v[k] * drur.v[k] + dzur.v[k] * dzur.v[k] + druz.v[k] * druz.v[k] +
                     dzuz.v[k] * dzuz.v[k] + uror.v[k] * uror.v[k];
    m = std::max(m, s);
  }
  d.grad_u_linf = std::sqrt(m);
  d.omega_Lnorm = l_norm_surrogate(omega);
  d.grad_h_rho_l2 = l2(d_r(rho));
  return d;
}

namespace {

CheckRow make_row(double t, double lhs, double rhs, double tol) {
  CheckRow r;
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  if (rhs > 0.0)
    r.excess = lhs / rhs - 1.0;
  else
    r.excess = lhs > 0.0 ? INFINITY : 0.0;
  r.pass = std::isfinite(lhs) && lhs <= rhs * (1.0 + tol);
  return r;
}

void finish(CheckReport& c) {
  c.pass = true;
  // the initial row holds with equality by construction, so the margin is taken after it
  c.worst_excess = c.rows.size() < 2 ? 0.0 : -INFINITY;
  for (size_t i = 0; i < c.rows.size(); ++i) {
    c.pass = c.pass && c.rows[i].pass;
    if (i > 0) c.worst_excess = std::max(c.worst_excess, c.rows[i].excess);
  }
}

void require_rows(const DiagnosticsRecord& rec) {
  if (rec.rows.empty()) throw std::invalid_argument("diagnostics check on empty record");
}

}  // namespace

CheckReport check_energy(const DiagnosticsRecord& rec, double tol) {
  require_rows(rec);
  CheckReport c{"energy", tol, {}, true, 0};
  const auto& r0 = rec.rows.front();
  for (const auto& r : rec.rows) {
    const double rhs = std::pow(r0.u_l2 + (r.t - r0.t) * r0.rho_l2, 2);
    c.rows.push_back(make_row(r.t, r.u_l2 * r.u_l2 + r.int_grad_h_u_sq, rhs, tol));
  }
  finish(c);
  return c;
}

DensityReport check_density(const DiagnosticsRecord& rec, double tol_l2, double tol_linf) {
  require_rows(rec);
  DensityReport d{{"density_l2", tol_l2, {}, true, 0}, {"density_linf", tol_linf, {}, true, 0}};
  const auto& r0 = rec.rows.front();
  for (const auto& r : rec.rows) {
    d.l2.rows.push_back(make_row(r.t, r.rho_l2 * r.rho_l2 + r.int_grad_h_rho_sq, r0.rho_l2 * r0.rho_l2, tol_l2));
    d.linf.rows.push_back(make_row(r.t, r.rho_linf, r0.rho_linf, tol_linf));
  }
  finish(d.l2);
  finish(d.linf);
  return d;
}

CheckReport check_omega_over_r(const DiagnosticsRecord& rec, double tol) {
  require_rows(rec);
  CheckReport c{"omega_over_r", tol, {}, true, 0};
  const auto& r0 = rec.rows.front();
  const double rhs = 2.0 * std::pow(r0.omega_over_r_l2 + r0.rho_l2, 2);
  for (const auto& r : rec.rows)
    c.rows.push_back(
        make_row(r.t, r.omega_over_r_l2 * r.omega_over_r_l2 + r.int_grad_h_omega_over_r_sq, rhs, tol));
  finish(c);
  return c;
}

CheckReport check_gamma(const DiagnosticsRecord& rec, double tol) {
  require_rows(rec);
  CheckReport c{"gamma_l2", tol, {}, true, 0};
  const double rhs = rec.rows.front().gamma_l2;
  for (const auto& r : rec.rows) c.rows.push_back(make_row(r.t, r.gamma_l2, rhs, tol));
  finish(c);
  return c;
}

namespace {

double envelope_c(const std::vector<double>& t, const std::vector<double>& q) {
  bool any = false;
  for (double x : q) any = any || x > 0.0;
  if (!any) return 0.0;
  auto ok = [&](double c) {
    for (size_t k = 0; k < t.size(); ++k)
      if (q[k] > c * std::exp(std::exp(c * (t[k] - t[0])))) return false;
    return true;
  };
  double lo = 1e-12, hi = 1.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e6) return INFINITY;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
    if (hi / lo < 1 + 1e-12) break;
  }
  return hi;
}

}  // namespace

GrowthReport growth_report(const DiagnosticsRecord& rec) {
  require_rows(rec);
  GrowthReport g;
  g.abort = rec.abort;
  std::vector<double> t;
  for (const auto& r : rec.rows) t.push_back(r.t);
  auto add = [&](const char* name, auto get) {
    GrowthEntry e;
    e.name = name;
    std::vector<double> q;
    for (const auto& r : rec.rows) {
      const double v = get(r);
      e.finite = e.finite && std::isfinite(v);
      e.max_value = std::max(e.max_value, v);
      q.push_back(v);
    }
    e.envelope_c = e.finite ? envelope_c(t, q) : INFINITY;
    g.all_finite = g.all_finite && e.finite;
    g.entries.push_back(e);
  };
  add("dz_rho_l2", [](const DiagnosticsRow& r) { return r.dz_rho_l2; });
  add("dz_omega_l2", [](const DiagnosticsRow& r) { return r.dz_omega_l2; });
  add("int_grad_u_linf", [](const DiagnosticsRow& r) { return r.int_grad_u_linf; });
  add("omega_Lnorm", [](const DiagnosticsRow& r) { return r.omega_Lnorm; });
  if (g.abort) g.all_finite = false;
  return g;
}

std::string GrowthReport::text() const {
  std::ostringstream os;
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%-16s finite=%s max=%.6e envelope_C=%.6e\n", e.name.c_str(),
                  e.finite ? "yes" : "no", e.max_value, e.envelope_c);
    os << buf;
  }
  if (abort) os << "aborted at step " << abort->step << " t=" << abort->t << ": " << abort->reason << "\n";
  return os.str();
}

namespace {

void put_num(std::string& s, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  s += buf;
}

std::vector<std::vector<double>> parse_table(const std::string& csv, const char* header) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != header) throw std::runtime_error("diagnostics csv: unexpected header");
  std::vector<std::vector<double>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      row.push_back(std::strtod(p, &end));
      if (end == p) throw std::runtime_error("diagnostics csv: bad number in '" + line + "'");
      p = end;
      if (*p == ',') ++p;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string to_csv(const DiagnosticsRecord& rec) {
  std::string s = kDiagnosticsHeader;
  s += '\n';
  for (const auto& r : rec.rows) {
    const double v[] = {r.t,        r.u_l2,        r.grad_h_u_l2, r.rho_l2,     r.rho_linf,
                        r.omega_l2, r.omega_over_r_l2, r.grad_h_omega_over_r_l2, r.gamma_l2,
                        r.dz_rho_l2, r.dz_omega_l2, r.grad_u_linf, r.omega_Lnorm, r.cfl};
    for (size_t k = 0; k < std::size(v); ++k) {
      if (k) s += ',';
      put_num(s, v[k]);
    }
    s += '\n';
  }
  return s;
}

std::string extra_to_csv(const DiagnosticsRecord& rec) {
  std::string s = kDiagnosticsExtraHeader;
  s += '\n';
  for (const auto& r : rec.rows) {
    const double v[] = {r.t, r.grad_h_rho_l2, r.gamma_l4, r.gamma_linf};
    for (size_t k = 0; k < std::size(v); ++k) {
      if (k) s += ',';
      put_num(s, v[k]);
    }
    s += '\n';
  }
  return s;
}

DiagnosticsRecord from_csv(const std::string& main_csv, const std::string& extra_csv) {
  auto main = parse_table(main_csv, kDiagnosticsHeader);
  std::vector<std::vector<double>> extra;
  if (!extra_csv.empty()) {
    extra = parse_table(extra_csv, kDiagnosticsExtraHeader);
    if (extra.size() != main.size()) throw std::runtime_error("diagnostics csv: row count mismatch");
  }
  DiagnosticsRecord rec;
  for (size_t k = 0; k < main.size(); ++k) {
    const auto& m = main[k];
    if (m.size() != 14) throw std::runtime_error("diagnostics csv: expected 14 columns");
    DiagnosticsRow r;
    r.t = m[0];
    r.u_l2 = m[1];
    r.grad_h_u_l2 = m[2];
    r.rho_l2 = m[3];
    r.rho_linf = m[4];
    r.omega_l2 = m[5];
    r.omega_over_r_l2 = m[6];
    r.grad_h_omega_over_r_l2 = m[7];
    r.gamma_l2 = m[8];
    r.dz_rho_l2 = m[9];
    r.dz_omega_l2 = m[10];
    r.grad_u_linf = m[11];
    r.omega_Lnorm = m[12];
    r.cfl = m[13];
    if (!extra.empty()) {
      const auto& e = extra[k];
      if (e.size() != 4 || e[0] != r.t) throw std::runtime_error("diagnostics csv: extra row mismatch");
      r.grad_h_rho_l2 = e[1];
      r.gamma_l4 = e[2];
      r.gamma_linf = e[3];
    }
    rec.append(r);
  }
  return rec;
}

}  // namespace bsq
