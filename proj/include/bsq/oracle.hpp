#pragma once
// Brute-force references. Nothing here calls the banded or FFT kernels it is used to check.
#include <functional>
#include <string>

#include "bsq/box.hpp"
#include "bsq/fields.hpp"
#include "bsq/solver.hpp"

namespace bsq::oracle {

// Dense LU solve of (Delta_h - 1/r^2 + d_zz) A = -omega with a dense spectral d_zz; returns psi = r A.
ScalarField2D dense_poisson(const ScalarField2D& omega);

struct QuadratureResult {
  double value = 0;       // Richardson value from the two finest levels
  double previous = 0;    // Richardson value one level coarser
  bool converged = true;  // |value - previous| <= 1e-8 |value|
};
// (int_0^R int_0^Lz |f|^p 2 pi r dr dz)^(1/p), midpoint panels 2048^2, 4096^2, 8192^2
QuadratureResult quadrature_norm(const std::function<double(double, double)>& f, double p, double R, double Lz);

// h^3 sum_{j != i} K(x_i - x_j) f_j by explicit summation; n <= 24
RealField3D direct_convolution(const std::function<double(double, double, double)>& kernel, const RealField3D& f);

// Closed-form solution of the forced system on r >= 0, z periodic with period 2 pi.
struct ManufacturedSolution {
  std::string name = "gaussian_ring_decay";
  double omega(double r, double z, double t) const;
  double rho(double r, double z, double t) const;
  double psi(double r, double z, double t) const;
  double ur(double r, double z, double t) const;
  double uz(double r, double z, double t) const;
  double forcing_omega(double r, double z, double t) const;
  double forcing_rho(double r, double z, double t) const;
  // max relative mismatch between the closed-form forcing and the PDE residual
  // obtained by sixth-order finite differences of the exact fields at (r, z, t)
  double forcing_residual(double r, double z, double t, double step = 1e-2) const;
  ForcingFn omega_forcing_on(GridPtr g) const;
  ForcingFn rho_forcing_on(GridPtr g) const;
  ScalarField2D omega_on(GridPtr g, double t) const;
  ScalarField2D rho_on(GridPtr g, double t) const;
};

}  // namespace bsq::oracle
