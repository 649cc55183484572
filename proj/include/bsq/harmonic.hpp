#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "bsq/box.hpp"
#include "bsq/harness.hpp"

namespace bsq {

struct SpectralField3D {
  BoxSpec box;
  std::vector<std::complex<double>> coeffs;  // c_k with f(x) = sum c_k e^{i k.(x - x_0)}
  SpectralField3D() = default;
  explicit SpectralField3D(const BoxSpec& b) : box(b), coeffs(b.size()) {}
};

struct MeanNotZero : std::invalid_argument {
  std::complex<double> mean;
  MeanNotZero(std::complex<double> m, const std::string& what) : std::invalid_argument(what), mean(m) {}
};
struct NotAxisymmetric : std::invalid_argument {
  double deviation;
  NotAxisymmetric(double d, const std::string& what) : std::invalid_argument(what), deviation(d) {}
};
struct HermitianBroken : std::logic_error {
  using std::logic_error::logic_error;
};

SpectralField3D to_spectral(const RealField3D& f);
RealField3D to_physical(const SpectralField3D& f);
double hermitian_defect(const SpectralField3D& f);  // max |c(-k) - conj c(k)| / max |c|
void check_hermitian(const SpectralField3D& f, const char* op);
double coeff_l2(const SpectralField3D& f);  // sqrt(L^3 sum |c|^2), equals the physical L2 norm
// relative deviation of f from its 90-degree rotation about the x3 axis
double axisymmetry_defect(const RealField3D& f);
void check_axisymmetric(const RealField3D& f, double tol = 1e-8);
// returns (mean-free field, removed mean)
std::pair<SpectralField3D, double> remove_mean(const SpectralField3D& f);

// Fourier monomial (i k)^alpha (Delta^{-1})^inv_lap
struct Monomial {
  std::array<int, 3> alpha{0, 0, 0};
  int inv_lap = 0;
  int order() const { return alpha[0] + alpha[1] + alpha[2]; }
  bool operator<(const Monomial& o) const { return std::tie(alpha, inv_lap) < std::tie(o.alpha, o.inv_lap); }
};
Monomial operator*(const Monomial& a, const Monomial& b);
Monomial partial(int axis);               // axis 1..3
Monomial riesz_symbol(int i, int j);      // d_i d_j Delta^{-1}
Monomial inv_laplacian_symbol();

// periodic box operators
SpectralField3D apply_multiplier(const SpectralField3D& f, const Monomial& m);
SpectralField3D inverse_laplacian(const SpectralField3D& f);
SpectralField3D laplacian(const SpectralField3D& f);
SpectralField3D derivative(const SpectralField3D& f, int axis);
SpectralField3D riesz(const SpectralField3D& f, int i, int j);  // symbol +k_i k_j / |k|^2
SpectralField3D dr_over_r_inv_laplacian(const SpectralField3D& f);
SpectralField3D ur_over_r_from_identity(const SpectralField3D& omega_over_r);

// (x2^2/r^2) B11 + (x1^2/r^2) B22 - 2 (x1 x2/r^2) B12 with the factors taken pointwise
RealField3D combine_dr_over_r(const RealField3D& b11, const RealField3D& b22, const RealField3D& b12);

// Free-space (R^3) application of monomials to data supported in the box,
// by convolution with the Green's function truncated at D > sqrt(3) L.
class FreeSpaceConvolver {
 public:
  explicit FreeSpaceConvolver(const BoxSpec& box);
  const BoxSpec& box() const { return box_; }
  double cutoff() const { return D_; }
  RealField3D apply(const Monomial& m, const RealField3D& f);
  std::vector<RealField3D> apply_many(const std::vector<Monomial>& ms, const RealField3D& f);
  // kernel samples K(x_i) for separations i in [0, n]^3 (tests)
  std::vector<double> kernel_samples(const Monomial& m);

 private:
  const std::vector<std::complex<double>>& spectrum(const Monomial& m);
  BoxSpec box_;
  double D_;
  std::map<Monomial, std::vector<std::complex<double>>> cache_;
};

enum class Domain { Periodic, FreeSpace };

// The identities on physical samples, in either domain. Periodic inputs must be mean-free.
class IdentityEvaluator {
 public:
  IdentityEvaluator(const BoxSpec& box, Domain d);
  std::vector<RealField3D> apply_many(const std::vector<Monomial>& ms, const RealField3D& f);
  RealField3D dr_over_r_inv_laplacian(const RealField3D& f, bool check_axisym = true);
  // d_z Delta^{-1} g - 2 (d_r/r) Delta^{-1} d_z Delta^{-1} g, optionally with an extra derivative d^extra
  RealField3D ur_over_r(const RealField3D& omega_over_r, std::array<int, 3> extra = {0, 0, 0},
                        bool check_axisym = true);
  Domain domain() const { return dom_; }
  const BoxSpec& box() const { return box_; }

 private:
  BoxSpec box_;
  Domain dom_;
  std::unique_ptr<FreeSpaceConvolver> fs_;
};

// Meridian (poisson-module) references sampled on the box.
struct MeridianMatch {
  int r_refine = 8;         // dr = h / r_refine
  int R_factor = 8;         // R = R_factor L
  int Lz_factor = 16;       // Lz = Lz_factor L, dz = h
  bool richardson = true;   // combine dr and dr/2 solves to cancel the O(dr^2) term
};
// profile g(r, z) = omega_theta / r, centred at the box origin
RealField3D ur_over_r_meridian(const BoxSpec& box, const std::function<double(double, double)>& g,
                               const MeridianMatch& mm = {});
RealField3D dr_over_r_inv_laplacian_meridian(const BoxSpec& box, const std::function<double(double, double)>& f,
                                             const MeridianMatch& mm = {});

// kernel-form assembly of u^r/r
struct KernelConstants {
  std::complex<double> c1, gamma1;
  double leading = 2.0;  // coefficient of x3/|x|^3 is c1 - leading * gamma1 * i
  static KernelConstants corrected();
  static KernelConstants uncorrected();
};
struct KernelOracleResult {
  RealField3D value;     // real part of the assembled sum
  double imag_residue;   // ||Im|| / ||Re||
};
KernelOracleResult kernel_convolution_oracle(const RealField3D& omega_over_r,
                                             const KernelConstants& kc = KernelConstants::corrected());

struct SyReport {
  double max_ratio = 0;
  long valid_points = 0;
  long skipped = 0;
  bool vacuous() const { return valid_points == 0; }
};
// max |u^r/r| / ((1/|x|^2) * |omega/r|), singular cell omitted
SyReport check_sy_bound(const RealField3D& omega_over_r, const RealField3D& ur_over_r);
// h^3 sum_{j != i} K(x_i - x_j) f_j evaluated with zero-padded FFTs
RealField3D discrete_convolution(const std::function<double(double, double, double)>& kernel, const RealField3D& f);

// Random axisymmetric vortex profiles g = omega/r for the harnesses.
struct AxisymProfile {
  struct Blob {
    double a, b, zc, s;
  };
  std::vector<Blob> blobs;
  double value(double r, double z) const;
  double d_r(double r, double z) const;
};
AxisymProfile random_axisym_profile(std::uint64_t seed);

enum class IdentityLemma { UrSup, DzUr, UrL6, DrOverR, KernelBound };
const char* to_string(IdentityLemma l);
HarnessResult identity_harness(IdentityLemma which, int samples, std::uint64_t seed, const BoxSpec& box);

}  // namespace bsq
