#include "bsq/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bsq/kernels.hpp"

namespace bsq::oracle {

ScalarField2D dense_poisson(const ScalarField2D& omega) {
  const auto& g = *omega.grid;
  if (g.nr > 16 || g.nz > 16) throw std::invalid_argument("dense_poisson: grid larger than 16x16");
  const int nr = g.nr, nz = g.nz, N = nr * nz;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  auto id = [nz](int i, int j) { return i * nz + j; };
  const double dr2 = g.dr * g.dr;
  for (int i = 0; i < nr; ++i) {
    const double r = g.r[i], rm = i * g.dr, rp = (i + 1) * g.dr;
    for (int j = 0; j < nz; ++j) {
      const int row = id(i, j);
      // the axis face has zero radius, so the ghost value never enters
      if (i > 0) M(row, id(i - 1, j)) += rm / (r * dr2);
      M(row, row) -= (rm + rp) / (r * dr2) + 1.0 / (r * r);
      if (i + 1 < nr)
        M(row, id(i + 1, j)) += rp / (r * dr2);
      else
        M(row, row) -= rp / (r * dr2);  // homogeneous Dirichlet at the wall, ghost = -A
    }
  }
  // dense spectral second derivative, Nyquist kept
  for (int j = 0; j < nz; ++j)
    for (int l = 0; l < nz; ++l) {
      double s = 0.0;
      for (int m = -nz / 2 + 1; m <= nz / 2; ++m) {
        const double k = 2.0 * std::numbers::pi * m / g.Lz;
        s -= k * k * std::cos(k * (j - l) * g.dz);
      }
      s /= nz;
      for (int i = 0; i < nr; ++i) M(id(i, j), id(i, l)) += s;
    }
  Eigen::VectorXd rhs(N);
  for (int k = 0; k < N; ++k) rhs[k] = -omega.v[k];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (lu.rank() < N) throw std::runtime_error("dense_poisson: singular operator matrix");
  const Eigen::VectorXd A = lu.solve(rhs);
  ScalarField2D psi(omega.grid, Parity::Even);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nz; ++j) psi.v[id(i, j)] = g.r[i] * A[id(i, j)];
  return psi;
}

namespace {

double midpoint_integral(const std::function<double(double, double)>& f, double p, double R, double Lz, int n) {
  const double hr = R / n, hz = Lz / n;
  std::vector<double> rows(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * hr;
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) col[j] = std::pow(std::abs(f(r, (j + 0.5) * hz)), p);
    rows[i] = 2.0 * std::numbers::pi * r * pairwise_sum(col.data(), n);
  }
  return hr * hz * pairwise_sum(rows.data(), n);
}

}  // namespace

QuadratureResult quadrature_norm(const std::function<double(double, double)>& f, double p, double R, double Lz) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("quadrature_norm: need finite p >= 1");
  const double i1 = midpoint_integral(f, p, R, Lz, 2048);
  const double i2 = midpoint_integral(f, p, R, Lz, 4096);
  const double i3 = midpoint_integral(f, p, R, Lz, 8192);
  QuadratureResult q;
  const double e1 = (4.0 * i2 - i1) / 3.0, e2 = (4.0 * i3 - i2) / 3.0;
  if (!std::isfinite(e2)) throw std::runtime_error("quadrature_norm: profile not integrable");
  q.value = std::pow(std::max(e2, 0.0), 1.0 / p);
  q.previous = std::pow(std::max(e1, 0.0), 1.0 / p);
  q.converged = std::abs(q.value - q.previous) <= 1e-8 * std::abs(q.value);
  return q;
}

RealField3D direct_convolution(const std::function<double(double, double, double)>& kernel, const RealField3D& f) {
  const auto& b = f.box;
  const int n = b.n;
  if (n > 24) throw std::invalid_argument("direct_convolution: n > 24 rejected (O(n^6) sum)");
  const double h = b.h();
  const int m = 2 * n - 1;
  // kernel tabulated once on all separations, singular cell set to zero
  std::vector<double> K(static_cast<size_t>(m) * m * m, 0.0);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int s = 0; s < m; ++s) {
        const int dp = p - (n - 1), dq = q - (n - 1), ds = s - (n - 1);
        if (dp == 0 && dq == 0 && ds == 0) continue;
        K[(static_cast<size_t>(p) * m + q) * m + s] = kernel(dp * h, dq * h, ds * h);
      }
  RealField3D out(b);
  const double h3 = h * h * h;
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a2 = 0; a2 < n; ++a2)
          for (int c2 = 0; c2 < n; ++c2) {
            const double* Krow = &K[(static_cast<size_t>(a - a2 + n - 1) * m + (c - c2 + n - 1)) * m + (k + n - 1)];
            const double* frow = &f.v[b.idx(a2, c2, 0)];
            for (int k2 = 0; k2 < n; ++k2) s += Krow[-k2] * frow[k2];
          }
        out(a, c, k) = h3 * s;
      }
  return out;
}

// omega* = r chi E sin z, psi* = r^2 g E sin z with g = e^{-r^2}, chi = (9 - 4 r^2) g, E = e^{-t}
namespace {
double gfun(double r) { return std::exp(-r * r); }
double chi(double r) { return (9.0 - 4.0 * r * r) * gfun(r); }
double chi1(double r) { return gfun(r) * (8.0 * r * r * r - 26.0 * r); }
double chi2(double r) { return gfun(r) * (-16.0 * std::pow(r, 4) + 76.0 * r * r - 26.0); }
}  // namespace

double ManufacturedSolution::omega(double r, double z, double t) const { return r * chi(r) * std::exp(-t) * std::sin(z); }
double ManufacturedSolution::rho(double r, double z, double t) const { return chi(r) * std::exp(-t) * std::cos(z); }
double ManufacturedSolution::psi(double r, double z, double t) const {
  return r * r * gfun(r) * std::exp(-t) * std::sin(z);
}
double ManufacturedSolution::ur(double r, double z, double t) const { return -r * gfun(r) * std::exp(-t) * std::cos(z); }
double ManufacturedSolution::uz(double r, double z, double t) const {
  return 2.0 * gfun(r) * (1.0 - r * r) * std::exp(-t) * std::sin(z);
}

double ManufacturedSolution::forcing_omega(double r, double z, double t) const {
  const double E = std::exp(-t), S = std::sin(z), C = std::cos(z), g = gfun(r);
  const double x = chi(r), x1 = chi1(r), x2 = chi2(r);
  return -r * x * E * S + E * E * S * C * r * g * (-x - r * x1 + 2.0 * (1.0 - r * r) * x) -
         (3.0 * x1 + r * x2) * E * S + x1 * E * C + r * g * x * E * E * S * C;
}

double ManufacturedSolution::forcing_rho(double r, double z, double t) const {
  const double E = std::exp(-t), S = std::sin(z), C = std::cos(z), g = gfun(r);
  const double x = chi(r), x1 = chi1(r), x2 = chi2(r);
  double lap = x2 + (r > 0.0 ? x1 / r : x2);
  return -x * E * C - r * g * x1 * E * E * C * C - 2.0 * g * (1.0 - r * r) * x * E * E * S * S - lap * E * C;
}

double ManufacturedSolution::forcing_residual(double r, double z, double t, double h) const {
  // sixth-order central first and second differences
  auto d1 = [h](auto f) { return (-f(-3) + 9 * f(-2) - 45 * f(-1) + 45 * f(1) - 9 * f(2) + f(3)) / (60.0 * h); };
  auto d2 = [h](auto f) {
    return (2 * f(-3) - 27 * f(-2) + 270 * f(-1) - 490 * f(0) + 270 * f(1) - 27 * f(2) + 2 * f(3)) / (180.0 * h * h);
  };
  auto in_r = [&](auto F) { return [=, this](int k) { return (this->*F)(r + k * h, z, t); }; };
  auto in_z = [&](auto F) { return [=, this](int k) { return (this->*F)(r, z + k * h, t); }; };
  auto in_t = [&](auto F) { return [=, this](int k) { return (this->*F)(r, z, t + k * h); }; };
  using M = double (ManufacturedSolution::*)(double, double, double) const;
  const M W = &ManufacturedSolution::omega, P = &ManufacturedSolution::rho;
  const double u = ur(r, z, t), w = uz(r, z, t), om = omega(r, z, t);
  const double res_w = d1(in_t(W)) + u * d1(in_r(W)) + w * d1(in_z(W)) - (u / r) * om -
                       (d2(in_r(W)) + d1(in_r(W)) / r - om / (r * r)) + d1(in_r(P));
  const double res_p = d1(in_t(P)) + u * d1(in_r(P)) + w * d1(in_z(P)) - (d2(in_r(P)) + d1(in_r(P)) / r);
  const double fw = forcing_omega(r, z, t), fp = forcing_rho(r, z, t);
  const double ew = std::abs(res_w - fw) / std::max(1.0, std::abs(fw));
  const double ep = std::abs(res_p - fp) / std::max(1.0, std::abs(fp));
  return std::max(ew, ep);
}

ScalarField2D ManufacturedSolution::omega_on(GridPtr g, double t) const {
  return sample(g, Parity::Odd, [&](double r, double z) { return omega(r, z, t); });
}
ScalarField2D ManufacturedSolution::rho_on(GridPtr g, double t) const {
  return sample(g, Parity::Even, [&](double r, double z) { return rho(r, z, t); });
}
ForcingFn ManufacturedSolution::omega_forcing_on(GridPtr g) const {
  return [g, self = *this](double t) {
    return sample(g, Parity::Odd, [&](double r, double z) { return self.forcing_omega(r, z, t); });
  };
}
ForcingFn ManufacturedSolution::rho_forcing_on(GridPtr g) const {
  return [g, self = *this](double t) {
    return sample(g, Parity::Even, [&](double r, double z) { return self.forcing_rho(r, z, t); });
  };
}

}  // namespace bsq::oracle
