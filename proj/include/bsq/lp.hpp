#pragma once
// Littlewood-Paley blocks, Besov/Sobolev norms and inequality harnesses on the periodic box.
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bsq/box.hpp"
#include "bsq/fields.hpp"
#include "bsq/harmonic.hpp"
#include "bsq/harness.hpp"

namespace bsq {

// chi = 1 on [0, inner], 0 on [outer, inf), smooth monotone in between; phi(s) = chi(s/2) - chi(s).
struct DyadicBank {
  double inner = 0.75;
  double outer = 4.0 / 3.0;
  int jmax = 8;
  double chi(double s) const;
  double phi(double s) const;
  // multiplier of level j (j = -1 is the low-pass) at radial frequency s
  double level(int j, double s) const;
  // multiplier of the low-frequency cut-off S_q = sum_{j < q} Delta_j
  double low_pass(int q, double s) const { return chi(s / std::ldexp(1.0, q)); }
  std::string to_json() const;
  static DyadicBank from_json(const std::string& text);
};
DyadicBank make_bank(int jmax);

// max |chi(xi) + sum_j phi(2^-j xi) - 1| over grid frequencies with |xi| <= 2^jmax
double partition_residual(const DyadicBank& bank, const BoxSpec& box);
// worst leak of chi or phi outside its nominal support on the grid
double support_leak(const DyadicBank& bank, const BoxSpec& box);

enum class Direction { Full, Horizontal, Vertical };
SpectralField3D dyadic_block(const SpectralField3D& f, int j, Direction d, const DyadicBank& bank);
SpectralField3D low_frequency_cutoff(const SpectralField3D& f, int q, const DyadicBank& bank);  // S_q

struct BesovIndex {
  double s = 0, t = 0, p = 2, q = 2;  // p, q may be +inf
};
// Defining dyadic sum; warns on stderr when the spectrum extends past the bank.
double besov_norm(const SpectralField3D& f, const BesovIndex& idx, bool anisotropic, const DyadicBank& bank);
// spectral energy (relative) outside the range covered by the bank
double besov_tail(const SpectralField3D& f, const DyadicBank& bank);

// (int (1 + xi_h^2)^s (1 + xi_3^2)^t |u^|^2)^(1/2)
double sobolev_norm(const SpectralField3D& f, double s, double t);
// (int (1 + |xi|^2)^s |u^|^2)^(1/2)
double sobolev_norm_iso(const SpectralField3D& f, double s);
// ||u|| + ||Lh^s u|| + ||Lv^t u|| + ||Lh^s Lv^t u||
double lambda_equivalent(const SpectralField3D& f, double s, double t);
// || ||u||_{H^s_h} ||_{H^t_v}
double mixed_norm(const SpectralField3D& f, double s, double t);

// Random real field with i.i.d. complex Gaussian coefficients on the fixed modes |m_a| < n_gen/2,
// envelope exp(-|m|^2 / (2 sigma^2)) in index units, Hermitian and mean-free. The same seed and
// n_gen give the same continuum field on every box size >= n_gen.
SpectralField3D random_field(const BoxSpec& box, std::uint64_t seed, int n_gen, double sigma);
// Random field supported on the annulus of level j, then projected by Delta_j.
SpectralField3D random_band_field(const BoxSpec& box, int j, std::uint64_t seed, const DyadicBank& bank);

struct BernsteinRow {
  int j, k;  // level and derivative order
  double a, b;
  std::uint64_t seed;
  double forward;  // max_{|alpha|=k} ||d^alpha D_j f||_b / (2^{j(k + 3(1/a - 1/b))} ||D_j f||_a)
  double reverse;  // 2^{jk} ||D_j f||_a / max_{|alpha|=k} ||d^alpha D_j f||_a  (NaN when k = 0)
};
struct BernsteinReport {
  double cstar = 4.0;
  std::vector<BernsteinRow> rows;
  double max_log2 = 0;  // max |log2| over asserted ratios
  bool pass = true;
  std::vector<std::string> failures;
};
// For a = b the forward ratio is held to [1/C*, C*]; for a < b only the upper bound applies.
// The reverse ratio is held to <= C*.
BernsteinReport check_bernstein(const std::vector<int>& levels, const std::vector<std::pair<double, double>>& pairs,
                                int samples, std::uint64_t seed, const BoxSpec& box, const DyadicBank& bank,
                                double cstar = 4.0);

struct HeatDecayReport {
  double rate = 0, lo = 0, hi = 0;
  bool pass = false;
};
// evolves Delta_j f by exp(-t |xi|^2) and fits -d/dt log ||.||_p
HeatDecayReport check_heat_decay(const SpectralField3D& f, int j, const std::vector<double>& t_grid, double p,
                                 const DyadicBank& bank);

enum class SpecialNorm { L, SqrtL, LogLip };
double special_norm(const RealField3D& f, SpecialNorm kind, int p_max, const DyadicBank& bank);

struct QuasiOrthoReport {
  double block_residual = 0;       // max ||D_j D_j' f|| / ||f|| over |j - j'| >= 2
  double paraproduct_residual = 0;  // max ||D_j P|| / ||P||, P = S_{j'-1} u D_j' v, |j - j'| >= 5
};
QuasiOrthoReport check_quasi_orthogonality(const BoxSpec& box, std::uint64_t seed, const DyadicBank& bank);

enum class LpInequality { Trilinear, TrilinearAniso, Sharp, LinfHalpha, Interp, Algebra };
const char* to_string(LpInequality w);
struct InequalityParams {
  int n_gen = 0;          // 0: box.n / 2
  double alpha = 0.75;    // LinfHalpha, in (1/2, 1]
  double theta = 0.5;     // Interp
  double s1 = 0.5, t1 = 0.0, s2 = 2.0, t2 = 1.5;  // Interp endpoints
  double s = 1.5, t = 1.0;  // Algebra
};
// (lhs, rhs without constant) of one inequality on given fields; g and h are ignored where unused
std::pair<double, double> inequality_sides(LpInequality which, const SpectralField3D& f, const SpectralField3D& g,
                                           const SpectralField3D& h, const InequalityParams& prm = {});
HarnessResult inequality_harness(LpInequality which, int samples, std::uint64_t seed, const BoxSpec& box,
                                 const InequalityParams& prm = {});

// Axisymmetric meridian field lifted onto a cube of side max(2R, Lz) centred on the mid-plane.
RealField3D lift_to_box(const ScalarField2D& f, int n);

}  // namespace bsq
