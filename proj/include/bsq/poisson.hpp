#pragma once
#include <vector>

#include "bsq/fields.hpp"
#include "bsq/kernels.hpp"

namespace bsq {

// Per z-wavenumber factorizations of the meridian operator for A = psi/r:
// (Delta_h - 1/r^2 - k^2) A = -omega, Dirichlet at r=R. psi = r A then satisfies
// (d_rr - (1/r) d_r + d_zz) psi = -r omega.
struct StreamSolveWorkspace {
  GridPtr grid;
  std::vector<TriFactor> modes;  // index m = 0 .. nz/2
};

struct IllPosedWavenumber : std::runtime_error {
  int mode;
  IllPosedWavenumber(int m, const std::string& what) : std::runtime_error(what), mode(m) {}
};

// Rows of the conservative radial operator Delta_h [- 1/r^2] - k2 with the
// wall ghost folded in: sub a, diagonal b, super c.
void radial_operator(const MeridianGrid& g, WallBC bc, bool minus_inv_r2, double k2, std::vector<double>& a,
                     std::vector<double>& b, std::vector<double>& c);

StreamSolveWorkspace make_stream_workspace(GridPtr g);

// A = psi/r (Odd).
ScalarField2D solve_psi_over_r(const ScalarField2D& omega_theta, const StreamSolveWorkspace& ws,
                               Exec e = default_exec());
// psi (Even: psi ~ r^2 at the axis).
ScalarField2D solve_streamfunction(const ScalarField2D& omega_theta, const StreamSolveWorkspace& ws,
                                   Exec e = default_exec());
ScalarField2D solve_streamfunction(const ScalarField2D& omega_theta);

// ||L_h A + omega|| / ||omega|| for the discrete system actually solved.
double stream_residual(const ScalarField2D& omega_theta, const ScalarField2D& psi_over_r);

VelocityField2D velocity_from_streamfunction(const ScalarField2D& psi);
ScalarField2D ur_over_r(const VelocityField2D& u);

// (1/r) d_r(r u^r) + d_z u^z
ScalarField2D divergence(const VelocityField2D& u);
// max |div| / max(|(1/r) d_r(r u^r)|, |d_z u^z|); 0 for u = 0
double relative_divergence(const VelocityField2D& u);
// d_z u^r - d_r u^z
ScalarField2D curl_theta(const VelocityField2D& u);

// Axisymmetric scalar Poisson problem Delta phi = f (Even, Dirichlet at r=R).
ScalarField2D solve_poisson_even(const ScalarField2D& f);

}  // namespace bsq
