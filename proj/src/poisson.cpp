#include "bsq/poisson.hpp"

#include <cmath>
#include <mutex>

#include "bsq/fft.hpp"

namespace bsq {

void radial_operator(const MeridianGrid& g, WallBC bc, bool minus_inv_r2, double k2, std::vector<double>& a,
                     std::vector<double>& b, std::vector<double>& c) {
  const int n = g.nr;
  a.assign(n, 0.0);
  b.assign(n, 0.0);
  c.assign(n, 0.0);
  const double idr2 = 1.0 / (g.dr * g.dr);
  for (int i = 0; i < n; ++i) {
    const double rp = g.r_face(i + 1), rm = g.r_face(i), ir = 1.0 / g.r[i];
    a[i] = rm * ir * idr2;
    c[i] = rp * ir * idr2;
    b[i] = -(rp + rm) * ir * idr2 - k2;
    if (minus_inv_r2) b[i] -= ir * ir;
  }
  b[n - 1] += (bc == WallBC::Dirichlet ? -1.0 : 1.0) * c[n - 1];
  c[n - 1] = 0.0;
  a[0] = 0.0;
}

namespace {

template <class Factors>
ScalarField2D spectral_column_solve(const ScalarField2D& rhs, const Factors& modes, double scale_rhs,
                                    Parity out_parity, Exec e) {
  const auto& g = *rhs.grid;
  const int nh = g.nz / 2 + 1;
  std::vector<fft::cplx> c(static_cast<size_t>(g.nr) * nh);
  fft::rows_r2c(rhs.v.data(), c.data(), g.nr, g.nz);
  const double s = scale_rhs / g.nz;
  for (auto& x : c) x *= s;
  if (e == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nh; ++m) tri_solve(modes[m], c.data() + m, nh);
  } else {
    for (int m = 0; m < nh; ++m) tri_solve(modes[m], c.data() + m, nh);
  }
  ScalarField2D out(rhs.grid, out_parity);
  fft::rows_c2r(c.data(), out.v.data(), g.nr, g.nz);
  return out;
}

}  // namespace

StreamSolveWorkspace make_stream_workspace(GridPtr g) {
  StreamSolveWorkspace ws;
  ws.grid = g;
  const int nh = g->nz / 2 + 1;
  std::vector<double> a, b, c;
  for (int m = 0; m < nh; ++m) {
    const double k = z_wavenumber(*g, m);
    radial_operator(*g, WallBC::Dirichlet, true, k * k, a, b, c);
    try {
      ws.modes.push_back(tri_factor(a, b, c));
    } catch (const SingularSystem& err) {
      throw IllPosedWavenumber(m, "stream solve: singular system at z-mode " + std::to_string(m) + " (" +
                                      err.what() + ")");
    }
  }
  return ws;
}

ScalarField2D solve_psi_over_r(const ScalarField2D& omega, const StreamSolveWorkspace& ws, Exec e) {
  require_finite(omega, "solve_streamfunction");
  if (omega.parity != Parity::Odd) throw std::invalid_argument("solve_streamfunction: omega_theta must be Odd");
  if (!omega.grid->same_as(*ws.grid)) throw std::invalid_argument("solve_streamfunction: workspace grid mismatch");
  return spectral_column_solve(omega, ws.modes, -1.0, Parity::Odd, e);
}

ScalarField2D solve_streamfunction(const ScalarField2D& omega, const StreamSolveWorkspace& ws, Exec e) {
  return times_r(solve_psi_over_r(omega, ws, e));
}

ScalarField2D solve_streamfunction(const ScalarField2D& omega) {
  static std::mutex mu;
  static std::shared_ptr<const StreamSolveWorkspace> last;
  std::shared_ptr<const StreamSolveWorkspace> ws;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (!last || !last->grid->same_as(*omega.grid))
      last = std::make_shared<StreamSolveWorkspace>(make_stream_workspace(omega.grid));
    ws = last;
  }
  return solve_streamfunction(omega, *ws);
}

double stream_residual(const ScalarField2D& omega, const ScalarField2D& A) {
  auto lap = laplacian_h(A, WallBC::Dirichlet);
  auto zz = d_zz(A);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < A.nr(); ++i) {
    const double ir2 = 1.0 / (A.grid->r[i] * A.grid->r[i]);
    for (int j = 0; j < A.nz(); ++j) {
      const double res = lap(i, j) - A(i, j) * ir2 + zz(i, j) + omega(i, j);
      num += res * res;
      den += omega(i, j) * omega(i, j);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

VelocityField2D velocity_from_streamfunction(const ScalarField2D& psi) {
  VelocityField2D u;
  u.ur = scaled(-1.0, divide_by_r(d_z(psi)));
  u.uz = divide_by_r(d_r(psi));
  return u;
}

ScalarField2D ur_over_r(const VelocityField2D& u) { return divide_by_r(u.ur); }

ScalarField2D divergence(const VelocityField2D& u) {
  return axpy(1.0, divide_by_r(d_r(times_r(u.ur))), d_z(u.uz));
}

double relative_divergence(const VelocityField2D& u) {
  auto a = divide_by_r(d_r(times_r(u.ur)));
  auto b = d_z(u.uz);
  const double scale = std::max(max_abs(a), max_abs(b));
  if (scale == 0.0) return 0.0;
  return max_abs(axpy(1.0, a, b)) / scale;
}

ScalarField2D curl_theta(const VelocityField2D& u) { return axpy(-1.0, d_r(u.uz), d_z(u.ur)); }

ScalarField2D solve_poisson_even(const ScalarField2D& f) {
  require_finite(f, "solve_poisson_even");
  const auto& g = *f.grid;
  const int nh = g.nz / 2 + 1;
  std::vector<TriFactor> modes;
  std::vector<double> a, b, c;
  for (int m = 0; m < nh; ++m) {
    const double k = z_wavenumber(g, m);
    radial_operator(g, WallBC::Dirichlet, false, k * k, a, b, c);
    modes.push_back(tri_factor(a, b, c));
  }
  return spectral_column_solve(f, modes, 1.0, Parity::Even, default_exec());
}

}  // namespace bsq
