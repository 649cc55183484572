#include "bsq/solver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

namespace bsq {

namespace {

ScalarField2D maybe_dealias(const ScalarField2D& f, bool on) { return on ? dealias_z(f) : f; }

// G(f)_i = [r_{i+1/2}(f_{i+1}-f_i) + r_{i-1/2}(f_i-f_{i-1})] / (2 r_i dr), missing faces dropped.
// It is minus the weighted adjoint of radial_div below.
void radial_grad_rows(const MeridianGrid& g, const double* f, double* out, int i0, int i1) {
  const int nr = g.nr, nz = g.nz;
  for (int i = i0; i < i1; ++i) {
    const double s = 0.5 / (g.r[i] * g.dr);
    const double rp = (i + 1 < nr) ? g.r_face(i + 1) : 0.0;
    const double rm = (i > 0) ? g.r_face(i) : 0.0;
    const double* fi = f + static_cast<size_t>(i) * nz;
    const double* fp = (i + 1 < nr) ? fi + nz : fi;
    const double* fm = (i > 0) ? fi - nz : fi;
    double* o = out + static_cast<size_t>(i) * nz;
    for (int j = 0; j < nz; ++j) o[j] = s * (rp * (fp[j] - fi[j]) + rm * (fi[j] - fm[j]));
  }
}

// Dv(q)_i = (F_{i+1/2} - F_{i-1/2}) / (r_i dr), F_{i+1/2} = r_{i+1/2}(q_i+q_{i+1})/2, zero at axis and wall
void radial_div_rows(const MeridianGrid& g, const double* q, double* out, int i0, int i1) {
  const int nr = g.nr, nz = g.nz;
  for (int i = i0; i < i1; ++i) {
    const double s = 0.5 / (g.r[i] * g.dr);
    const double rp = (i + 1 < nr) ? g.r_face(i + 1) : 0.0;
    const double rm = (i > 0) ? g.r_face(i) : 0.0;
    const double* qi = q + static_cast<size_t>(i) * nz;
    const double* qp = (i + 1 < nr) ? qi + nz : qi;
    const double* qm = (i > 0) ? qi - nz : qi;
    double* o = out + static_cast<size_t>(i) * nz;
    for (int j = 0; j < nz; ++j) o[j] = s * (rp * (qi[j] + qp[j]) - rm * (qm[j] + qi[j]));
  }
}

template <class RowKernel>
void rows_apply(RowKernel k, const MeridianGrid& g, const double* in, double* out, Exec e) {
  if (e == Exec::Serial) return k(g, in, out, 0, g.nr);
  constexpr int kRowBlock = 16;
  const int nb = (g.nr + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nb; ++b) k(g, in, out, b * kRowBlock, std::min(g.nr, (b + 1) * kRowBlock));
}

ScalarField2D product_exec(const ScalarField2D& a, const ScalarField2D& b, Exec e) {
  ScalarField2D out(a.grid, a.parity == b.parity ? Parity::Even : Parity::Odd);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.v.size());
  if (e == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) out.v[k] = a.v[k] * b.v[k];
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) out.v[k] = a.v[k] * b.v[k];
  }
  return out;
}

ScalarField2D advection_impl(const VelocityField2D& u, const ScalarField2D& f, bool dealias, Exec e) {
  const auto& g = *f.grid;
  ScalarField2D gf(f.grid, flip(f.parity));
  rows_apply(radial_grad_rows, g, f.v.data(), gf.v.data(), e);
  auto a1 = maybe_dealias(product_exec(u.ur, gf, e), dealias);
  auto q = maybe_dealias(product_exec(u.ur, f, e), dealias);
  ScalarField2D a2(f.grid, f.parity);
  rows_apply(radial_div_rows, g, q.v.data(), a2.v.data(), e);
  auto a3 = maybe_dealias(product_exec(u.uz, d_z(f), e), dealias);
  auto a4 = d_z(maybe_dealias(product_exec(u.uz, f, e), dealias));
  ScalarField2D out(f.grid, f.parity);
  for (size_t k = 0; k < out.v.size(); ++k) out.v[k] = 0.5 * ((a1.v[k] + a2.v[k]) + (a3.v[k] + a4.v[k]));
  return out;
}

enum FieldId { kOmega = 0, kRho = 1 };

const TriFactor& implicit_factor(StepCache& c, const MeridianGrid& g, FieldId id, double coef) {
  auto key = std::make_pair(static_cast<int>(id), coef);
  auto it = c.implicit.find(key);
  if (it != c.implicit.end()) return it->second;
  std::vector<double> a, b, d;
  radial_operator(g, id == kOmega ? WallBC::Dirichlet : WallBC::Neumann, id == kOmega, 0.0, a, b, d);
  for (int i = 0; i < g.nr; ++i) {
    a[i] = -coef * a[i];
    b[i] = 1.0 - coef * b[i];
    d[i] = -coef * d[i];
  }
  try {
    return c.implicit.emplace(key, tri_factor(a, b, d)).first->second;
  } catch (const SingularSystem& err) {
    throw NumericalError(std::string("implicit solve: ") + err.what());
  }
}

ScalarField2D apply_linear(const ScalarField2D& f, FieldId id) {
  if (id == kRho) return laplacian_h(f, WallBC::Neumann);
  auto out = laplacian_h(f, WallBC::Dirichlet);
  for (int i = 0; i < f.nr(); ++i) {
    const double ir2 = 1.0 / (f.grid->r[i] * f.grid->r[i]);
    for (int j = 0; j < f.nz(); ++j) out(i, j) -= ir2 * f(i, j);
  }
  return out;
}

// (I - coef L) x = rhs
ScalarField2D implicit_solve(StepCache& c, ScalarField2D rhs, FieldId id, double coef) {
  const auto& fac = implicit_factor(c, *rhs.grid, id, coef);
  tri_solve_columns(fac, rhs.v.data(), rhs.nz(), default_exec());
  return rhs;
}

void check_finite_state(const SimState& s) {
  if (!all_finite(s.omega_theta) || !all_finite(s.rho) || !all_finite(s.velocity.ur) || !all_finite(s.velocity.uz))
    throw NumericalError("non-finite value at t=" + std::to_string(s.t));
}

}  // namespace

SimState make_state(double t, ScalarField2D omega, ScalarField2D rho) {
  require_same_grid(omega, rho);
  if (omega.parity != Parity::Odd || rho.parity != Parity::Even)
    throw std::invalid_argument("make_state: omega_theta must be Odd and rho Even");
  SimState s;
  s.t = t;
  s.omega_theta = std::move(omega);
  s.rho = std::move(rho);
  s.cache = std::make_shared<StepCache>();
  s.cache->stream = make_stream_workspace(s.omega_theta.grid);
  refresh_velocity(s);
  return s;
}

void refresh_velocity(SimState& s) {
  s.psi = solve_streamfunction(s.omega_theta, s.cache->stream);
  s.velocity = velocity_from_streamfunction(s.psi);
}

double cfl_number(const VelocityField2D& u, double dt) {
  const auto& g = *u.ur.grid;
  double m = 0.0;
  for (size_t k = 0; k < u.ur.v.size(); ++k)
    m = std::max(m, std::max(std::abs(u.ur.v[k]) / g.dr, std::abs(u.uz.v[k]) / g.dz));
  return dt * m;
}

ScalarField2D advection(const VelocityField2D& u, const ScalarField2D& f, bool dealias, Exec e) {
  return advection_impl(u, f, dealias, e);
}

ScalarField2D advection_serial(const VelocityField2D& u, const ScalarField2D& f, bool dealias) {
  return advection_impl(u, f, dealias, Exec::Serial);
}

std::pair<ScalarField2D, ScalarField2D> explicit_tendency_at(const SimState& s, const StepConfig& cfg, double t) {
  ScalarField2D tw(s.omega_theta.grid, Parity::Odd), tr(s.rho.grid, Parity::Even);
  if (cfg.transport) {
    const auto& u = s.velocity;
    auto adv_w = advection(u, s.omega_theta, cfg.dealias);
    auto adv_r = advection(u, s.rho, cfg.dealias);
    auto stretch = maybe_dealias(product(divide_by_r(u.ur), s.omega_theta), cfg.dealias);
    auto drho = d_r(s.rho);
    for (size_t k = 0; k < tw.v.size(); ++k) {
      tw.v[k] = -adv_w.v[k] - drho.v[k] + stretch.v[k];
      tr.v[k] = -adv_r.v[k];
    }
  }
  if (cfg.forcing_omega) {
    auto f = cfg.forcing_omega(t);
    for (size_t k = 0; k < tw.v.size(); ++k) tw.v[k] += f.v[k];
  }
  if (cfg.forcing_rho) {
    auto f = cfg.forcing_rho(t);
    for (size_t k = 0; k < tr.v.size(); ++k) tr.v[k] += f.v[k];
  }
  return {std::move(tw), std::move(tr)};
}

std::pair<ScalarField2D, ScalarField2D> explicit_tendency(const SimState& s, const StepConfig& cfg) {
  return explicit_tendency_at(s, cfg, s.t);
}

SimState step(const SimState& s, const StepConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double cfl = cfl_number(s.velocity, cfg.dt);
  if (!(cfl <= cfg.cfl_max)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "CFL %.4g exceeds %.4g at t=%.6g", cfl, cfg.cfl_max, s.t);
    throw CflError(cfl, buf);
  }
  const double dt = cfg.dt;
  auto& cache = *s.cache;
  SimState n = s;

  if (cfg.scheme == Scheme::CNAB2) {
    auto N = explicit_tendency(s, cfg);
    const bool ab2 = s.prev_explicit.has_value() && s.prev_dt == dt;
    auto combine = [&](const ScalarField2D& cur, const ScalarField2D* prev, const ScalarField2D& f, FieldId id) {
      auto lf = apply_linear(f, id);
      ScalarField2D rhs(f.grid, f.parity);
      for (size_t k = 0; k < rhs.v.size(); ++k) {
        const double e = prev ? 1.5 * cur.v[k] - 0.5 * prev->v[k] : cur.v[k];
        rhs.v[k] = f.v[k] + 0.5 * dt * lf.v[k] + dt * e;
      }
      return implicit_solve(cache, std::move(rhs), id, 0.5 * dt);
    };
    n.omega_theta = combine(N.first, ab2 ? &s.prev_explicit->first : nullptr, s.omega_theta, kOmega);
    n.rho = combine(N.second, ab2 ? &s.prev_explicit->second : nullptr, s.rho, kRho);
    n.prev_explicit = std::move(N);
    n.prev_dt = dt;
  } else {
    static constexpr double gam[3] = {8.0 / 15.0, 5.0 / 12.0, 3.0 / 4.0};
    static constexpr double zet[3] = {0.0, -17.0 / 60.0, -5.0 / 12.0};
    static constexpr double alp[3] = {4.0 / 15.0, 1.0 / 15.0, 1.0 / 6.0};
    static constexpr double cst[3] = {0.0, 8.0 / 15.0, 2.0 / 3.0};
    std::optional<std::pair<ScalarField2D, ScalarField2D>> prev;
    for (int st = 0; st < 3; ++st) {
      if (st > 0) refresh_velocity(n);
      auto N = explicit_tendency_at(n, cfg, s.t + cst[st] * dt);
      auto stage = [&](const ScalarField2D& f, const ScalarField2D& cur, const ScalarField2D* pv, FieldId id) {
        auto lf = apply_linear(f, id);
        ScalarField2D rhs(f.grid, f.parity);
        for (size_t k = 0; k < rhs.v.size(); ++k) {
          double e = gam[st] * cur.v[k];
          if (pv) e += zet[st] * pv->v[k];
          rhs.v[k] = f.v[k] + alp[st] * dt * lf.v[k] + dt * e;
        }
        return implicit_solve(cache, std::move(rhs), id, alp[st] * dt);
      };
      n.omega_theta = stage(n.omega_theta, N.first, prev ? &prev->first : nullptr, kOmega);
      n.rho = stage(n.rho, N.second, prev ? &prev->second : nullptr, kRho);
      prev = std::move(N);
    }
    n.prev_explicit.reset();
    n.prev_dt = 0.0;
  }
  n.t = s.t + dt;
  n.step = s.step + 1;
  if (!all_finite(n.omega_theta) || !all_finite(n.rho))
    throw NumericalError("non-finite value after step " + std::to_string(n.step));
  refresh_velocity(n);
  check_finite_state(n);
  return n;
}

DiagnosticsRecord run(const SimState& initial, const StepConfig& cfg, double t_end, const RunOptions& opt,
                      SimState* final_state) {
  DiagnosticsRecord rec;
  if (!(t_end >= initial.t)) throw std::invalid_argument("run: t_end before initial time");
  const double span = (t_end - initial.t) / cfg.dt;
  long nsteps = static_cast<long>(std::llround(span));
  if (std::abs(span - static_cast<double>(nsteps)) > 1e-9 * std::max(1.0, span))
    nsteps = static_cast<long>(std::ceil(span));
  if (final_state) *final_state = initial;
  if (nsteps == 0) return rec;

  auto observe = [&](const SimState& s) {
    auto row = measure(s.t, s.omega_theta, s.rho, s.velocity, cfl_number(s.velocity, cfg.dt));
    rec.append(row);
    for (const auto& o : opt.observers) o(s, rec.rows.back());
  };
  auto snapshot = [&](const SimState& s) {
    if (opt.snapshot_every <= 0 || opt.snapshot_dir.empty()) return;
    if (s.step % opt.snapshot_every != 0 && s.step != nsteps) return;
    char name[64];
    std::snprintf(name, sizeof name, "snap_%06ld.axbq", s.step);
    write_snapshot((std::filesystem::path(opt.snapshot_dir) / name).string(), s.t, s.omega_theta, s.rho);
  };

  SimState cur = initial;
  cur.step = 0;
  observe(cur);
  snapshot(cur);
  for (long k = 1; k <= nsteps; ++k) {
    try {
      SimState nxt = step(cur, cfg);
      nxt.t = initial.t + static_cast<double>(k) * cfg.dt;
      cur = std::move(nxt);
    } catch (const std::exception& err) {
      const bool is_cfl = dynamic_cast<const CflError*>(&err) != nullptr;
      if (!is_cfl && !dynamic_cast<const NumericalError*>(&err)) throw;
      rec.abort = AbortInfo{k, cur.t + cfg.dt, err.what()};
      if (!opt.dump_path.empty()) write_snapshot(opt.dump_path, cur.t, cur.omega_theta, cur.rho);
      if (final_state) *final_state = cur;
      throw RunError(std::string("step ") + std::to_string(k) + ": " + err.what(), k, rec, opt.dump_path, is_cfl);
    }
    if (k % std::max(1, opt.observe_every) == 0 || k == nsteps) observe(cur);
    snapshot(cur);
  }
  if (final_state) *final_state = std::move(cur);
  return rec;
}

}  // namespace bsq
