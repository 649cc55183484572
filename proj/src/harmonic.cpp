#include "bsq/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bsq/fft.hpp"
#include "bsq/kernels.hpp"
#include "bsq/oracle.hpp"
#include "bsq/poisson.hpp"

namespace bsq {

namespace {
constexpr double kHermitianTol = 1e-12;
constexpr double kMeanTol = 1e-12;
}  // namespace

SpectralField3D to_spectral(const RealField3D& f) {
  SpectralField3D s(f.box);
  for (size_t k = 0; k < f.v.size(); ++k) s.coeffs[k] = f.v[k];
  fft::cube_c2c(s.coeffs.data(), f.box.n, -1);
  const double inv = 1.0 / static_cast<double>(f.box.size());
  for (auto& c : s.coeffs) c *= inv;
  return s;
}

RealField3D to_physical(const SpectralField3D& s) {
  std::vector<std::complex<double>> tmp = s.coeffs;
  fft::cube_c2c(tmp.data(), s.box.n, +1);
  RealField3D f(s.box);
  for (size_t k = 0; k < tmp.size(); ++k) f.v[k] = tmp[k].real();
  return f;
}

double hermitian_defect(const SpectralField3D& f) {
  const int n = f.box.n;
  double big = 0.0, bad = 0.0;
  for (const auto& c : f.coeffs) big = std::max(big, std::abs(c));
  if (big == 0.0) return 0.0;
  auto neg = [n](int m) { return (n - m) % n; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const auto x = f.coeffs[f.box.idx(a, b, c)];
        const auto y = f.coeffs[f.box.idx(neg(a), neg(b), neg(c))];
        bad = std::max(bad, std::abs(y - std::conj(x)));
      }
  return bad / big;
}

void check_hermitian(const SpectralField3D& f, const char* op) {
  const double d = hermitian_defect(f);
  if (d > kHermitianTol) throw HermitianBroken(std::string(op) + ": Hermitian symmetry broken, defect " + std::to_string(d));
}

double coeff_l2(const SpectralField3D& f) {
  std::vector<double> a(f.coeffs.size());
  for (size_t k = 0; k < a.size(); ++k) a[k] = std::norm(f.coeffs[k]);
  return std::sqrt(std::pow(f.box.L, 3) * pairwise_sum(a.data(), a.size()));
}

double axisymmetry_defect(const RealField3D& f) {
  const int n = f.box.n;
  double big = box_max_abs(f), bad = 0.0;
  if (big == 0.0) return 0.0;
  // rotation (x1, x2) -> (-x2, x1): index a -> n-1-b
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) bad = std::max(bad, std::abs(f(a, b, c) - f(n - 1 - b, a, c)));
  return bad / big;
}

void check_axisymmetric(const RealField3D& f, double tol) {
  const double d = axisymmetry_defect(f);
  if (d > tol) throw NotAxisymmetric(d, "input is not axisymmetric: rotation deviation " + std::to_string(d));
}

std::pair<SpectralField3D, double> remove_mean(const SpectralField3D& f) {
  SpectralField3D g = f;
  const double m = g.coeffs[0].real();
  g.coeffs[0] = 0.0;
  return {g, m};
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int k = 0; k < 3; ++k) m.alpha[k] = a.alpha[k] + b.alpha[k];
  m.inv_lap = a.inv_lap + b.inv_lap;
  return m;
}

Monomial partial(int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  Monomial m;
  m.alpha[axis - 1] = 1;
  return m;
}

Monomial inv_laplacian_symbol() {
  Monomial m;
  m.inv_lap = 1;
  return m;
}

Monomial riesz_symbol(int i, int j) { return partial(i) * partial(j) * inv_laplacian_symbol(); }

SpectralField3D apply_multiplier(const SpectralField3D& f, const Monomial& m) {
  const auto& b = f.box;
  const int n = b.n;
  double big = 0.0;
  for (const auto& c : f.coeffs) big = std::max(big, std::abs(c));
  if (m.inv_lap > 0 && std::abs(f.coeffs[0]) > kMeanTol * std::max(big, 1e-300))
    throw MeanNotZero(f.coeffs[0], "Delta^{-1} needs a mean-free field; mean = " + std::to_string(f.coeffs[0].real()));
  // per-axis factors; odd powers vanish at the Nyquist mode
  std::vector<double> fac[3];
  std::vector<double> k2(n);
  for (int a = 0; a < 3; ++a) {
    fac[a].resize(n);
    for (int p = 0; p < n; ++p) {
      double k = b.k(p);
      if (m.alpha[a] % 2 == 1 && 2 * p == n) k = 0.0;
      fac[a][p] = std::pow(k, m.alpha[a]);
    }
  }
  for (int p = 0; p < n; ++p) k2[p] = b.k(p) * b.k(p);
  std::vector<double> sym(f.coeffs.size());
  for (int a = 0; a < n; ++a)
    for (int c1 = 0; c1 < n; ++c1)
      for (int c2 = 0; c2 < n; ++c2) {
        double s = fac[0][a] * fac[1][c1] * fac[2][c2];
        if (m.inv_lap > 0) {
          const double kk = k2[a] + k2[c1] + k2[c2];
          s = (kk == 0.0) ? 0.0 : s * std::pow(-1.0 / kk, m.inv_lap);
        }
        sym[b.idx(a, c1, c2)] = s;
      }
  SpectralField3D out = f;
  multiply_inplace(out.coeffs.data(), sym.data(), sym.size(), default_exec());
  // (i)^{|alpha|}
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto ph = ipow[m.order() % 4];
  if (ph != std::complex<double>(1, 0))
    for (auto& c : out.coeffs) c *= ph;
  check_hermitian(out, "apply_multiplier");
  return out;
}

SpectralField3D inverse_laplacian(const SpectralField3D& f) { return apply_multiplier(f, inv_laplacian_symbol()); }

SpectralField3D laplacian(const SpectralField3D& f) {
  auto out = apply_multiplier(f, partial(1) * partial(1));
  for (int axis = 2; axis <= 3; ++axis) {
    const auto t = apply_multiplier(f, partial(axis) * partial(axis));
    for (size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += t.coeffs[k];
  }
  return out;
}

SpectralField3D derivative(const SpectralField3D& f, int axis) { return apply_multiplier(f, partial(axis)); }

SpectralField3D riesz(const SpectralField3D& f, int i, int j) { return apply_multiplier(f, riesz_symbol(i, j)); }

RealField3D combine_dr_over_r(const RealField3D& b11, const RealField3D& b22, const RealField3D& b12) {
  const auto& b = b11.box;
  RealField3D out(b);
  for (int a = 0; a < b.n; ++a)
    for (int c = 0; c < b.n; ++c) {
      const double x1 = b.x(a), x2 = b.x(c), r2 = x1 * x1 + x2 * x2;
      const double w11 = x2 * x2 / r2, w22 = x1 * x1 / r2, w12 = 2.0 * x1 * x2 / r2;
      for (int k = 0; k < b.n; ++k) {
        const size_t id = b.idx(a, c, k);
        out.v[id] = w11 * b11.v[id] + w22 * b22.v[id] - w12 * b12.v[id];
      }
    }
  return out;
}

SpectralField3D dr_over_r_inv_laplacian(const SpectralField3D& f) {
  check_axisymmetric(to_physical(f));
  auto b11 = to_physical(riesz(f, 1, 1));
  auto b22 = to_physical(riesz(f, 2, 2));
  auto b12 = to_physical(riesz(f, 1, 2));
  auto out = to_spectral(combine_dr_over_r(b11, b22, b12));
  check_hermitian(out, "dr_over_r_inv_laplacian");
  return out;
}

SpectralField3D ur_over_r_from_identity(const SpectralField3D& g) {
  check_axisymmetric(to_physical(g));
  auto w = apply_multiplier(g, partial(3) * inv_laplacian_symbol());
  auto second = dr_over_r_inv_laplacian(w);
  SpectralField3D out = w;
  for (size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] -= 2.0 * second.coeffs[k];
  check_hermitian(out, "ur_over_r_from_identity");
  return out;
}

// ------------------------------------------------------------ evaluator

IdentityEvaluator::IdentityEvaluator(const BoxSpec& box, Domain d) : box_(box), dom_(d) {
  if (d == Domain::FreeSpace) fs_ = std::make_unique<FreeSpaceConvolver>(box);
}

std::vector<RealField3D> IdentityEvaluator::apply_many(const std::vector<Monomial>& ms, const RealField3D& f) {
  if (dom_ == Domain::FreeSpace) return fs_->apply_many(ms, f);
  auto s = to_spectral(f);
  std::vector<RealField3D> out;
  for (const auto& m : ms) out.push_back(to_physical(apply_multiplier(s, m)));
  return out;
}

RealField3D IdentityEvaluator::dr_over_r_inv_laplacian(const RealField3D& f, bool check_axisym) {
  if (check_axisym) check_axisymmetric(f);
  auto b = apply_many({riesz_symbol(1, 1), riesz_symbol(2, 2), riesz_symbol(1, 2)}, f);
  return combine_dr_over_r(b[0], b[1], b[2]);
}

RealField3D IdentityEvaluator::ur_over_r(const RealField3D& g, std::array<int, 3> extra, bool check_axisym) {
  if (check_axisym) check_axisymmetric(g);
  if (extra[0] != 0 || extra[1] != 0)
    throw std::invalid_argument("ur_over_r: only extra z-derivatives commute with the coordinate factors");
  Monomial e;
  e.alpha = extra;
  const Monomial dz_inv = e * partial(3) * inv_laplacian_symbol();
  auto t = apply_many({dz_inv, riesz_symbol(1, 1) * dz_inv, riesz_symbol(2, 2) * dz_inv, riesz_symbol(1, 2) * dz_inv}, g);
  return t[0] - 2.0 * combine_dr_over_r(t[1], t[2], t[3]);
}

// ------------------------------------------------------------ meridian references

namespace {

struct MeridianSetup {
  GridPtr grid;
  double zc;
  int j_offset;  // meridian j = j_offset + box index c
};

MeridianSetup meridian_setup(const BoxSpec& box, const MeridianMatch& mm) {
  const double h = box.h();
  const int nz = mm.Lz_factor * box.n;
  const int nr = mm.R_factor * mm.r_refine * box.n;
  MeridianSetup s;
  s.grid = make_grid(nr, nz, mm.R_factor * box.L, mm.Lz_factor * box.L);
  s.zc = 0.5 * s.grid->Lz + 0.5 * h;
  s.j_offset = nz / 2 - box.n / 2 + 1;
  return s;
}

// 4-point Lagrange in r with even reflection across the axis
RealField3D sample_even_on_box(const BoxSpec& box, const MeridianSetup& s, const ScalarField2D& f) {
  const auto& g = *s.grid;
  RealField3D out(box);
  auto at = [&](int i, int j) {
    if (i < 0) i = -i - 1;
    return f(i, j);
  };
  for (int a = 0; a < box.n; ++a)
    for (int b = 0; b < box.n; ++b) {
      const double r = std::hypot(box.x(a), box.x(b));
      const double sr = r / g.dr - 0.5;
      const int i = static_cast<int>(std::floor(sr));
      const double t = sr - i;
      const double w[4] = {-t * (t - 1) * (t - 2) / 6.0, (t + 1) * (t - 1) * (t - 2) / 2.0,
                           -(t + 1) * t * (t - 2) / 2.0, (t + 1) * t * (t - 1) / 6.0};
      for (int c = 0; c < box.n; ++c) {
        const int j = s.j_offset + c;
        double v = 0.0;
        for (int q = 0; q < 4; ++q) v += w[q] * at(i - 1 + q, j);
        out(a, b, c) = v;
      }
    }
  return out;
}

}  // namespace

namespace {

RealField3D richardson(const MeridianMatch& mm, const std::function<RealField3D(const MeridianMatch&)>& solve) {
  if (!mm.richardson) return solve(mm);
  MeridianMatch fine = mm;
  fine.r_refine *= 2;
  return (4.0 / 3.0) * solve(fine) - (1.0 / 3.0) * solve(mm);
}

}  // namespace

RealField3D ur_over_r_meridian(const BoxSpec& box, const std::function<double(double, double)>& g,
                               const MeridianMatch& mm) {
  return richardson(mm, [&](const MeridianMatch& m) {
    auto s = meridian_setup(box, m);
    auto omega = sample(s.grid, Parity::Odd, [&](double r, double z) { return r * g(r, z - s.zc); });
    auto ws = make_stream_workspace(s.grid);
    auto A = solve_psi_over_r(omega, ws);
    auto u = ur_over_r(velocity_from_streamfunction(times_r(A)));
    return sample_even_on_box(box, s, u);
  });
}

RealField3D dr_over_r_inv_laplacian_meridian(const BoxSpec& box, const std::function<double(double, double)>& f,
                                             const MeridianMatch& mm) {
  return richardson(mm, [&](const MeridianMatch& m) {
    auto s = meridian_setup(box, m);
    auto src = sample(s.grid, Parity::Even, [&](double r, double z) { return f(r, z - s.zc); });
    auto phi = solve_poisson_even(src);
    return sample_even_on_box(box, s, divide_by_r(d_r(phi)));
  });
}

// ------------------------------------------------------------ kernel form

KernelConstants KernelConstants::corrected() {
  const double pi = std::numbers::pi;
  return {std::complex<double>(1.0 / (4.0 * pi), 0.0), std::complex<double>(0.0, -1.0 / (8.0 * pi)), 2.0};
}

KernelConstants KernelConstants::uncorrected() {
  const double pi = std::numbers::pi;
  // c1 = 2 pi^{3/2} Gamma(1/2) / Gamma(1), gamma1 = i pi^2
  return {std::complex<double>(2.0 * std::pow(pi, 1.5) * std::tgamma(0.5), 0.0), std::complex<double>(0.0, pi * pi),
          4.0};
}

KernelOracleResult kernel_convolution_oracle(const RealField3D& g, const KernelConstants& kc) {
  if (g.box.n > 24) throw std::invalid_argument("kernel_convolution_oracle: n > 24 rejected (O(n^6) direct sum)");
  auto k0 = oracle::direct_convolution(
      [](double x, double y, double z) { return z / std::pow(x * x + y * y + z * z, 1.5); }, g);
  auto k11 = oracle::direct_convolution(
      [](double x, double y, double z) { return x * x * z / std::pow(x * x + y * y + z * z, 2.5); }, g);
  auto k22 = oracle::direct_convolution(
      [](double x, double y, double z) { return y * y * z / std::pow(x * x + y * y + z * z, 2.5); }, g);
  auto k12 = oracle::direct_convolution(
      [](double x, double y, double z) { return x * y * z / std::pow(x * x + y * y + z * z, 2.5); }, g);
  const std::complex<double> I(0.0, 1.0);
  const auto lead = kc.c1 - kc.leading * kc.gamma1 * I;
  const auto six = 6.0 * kc.gamma1 * I;
  const auto& b = g.box;
  KernelOracleResult res{RealField3D(b), 0.0};
  double re2 = 0.0, im2 = 0.0;
  for (int a = 0; a < b.n; ++a)
    for (int c = 0; c < b.n; ++c) {
      const double x1 = b.x(a), x2 = b.x(c), r2 = x1 * x1 + x2 * x2;
      for (int k = 0; k < b.n; ++k) {
        const size_t id = b.idx(a, c, k);
        const auto v = lead * k0.v[id] +
                       six * (x2 * x2 / r2 * k11.v[id] + x1 * x1 / r2 * k22.v[id] - 2.0 * x1 * x2 / r2 * k12.v[id]);
        res.value.v[id] = v.real();
        re2 += v.real() * v.real();
        im2 += v.imag() * v.imag();
      }
    }
  res.imag_residue = re2 > 0.0 ? std::sqrt(im2 / re2) : std::sqrt(im2);
  return res;
}

RealField3D discrete_convolution(const std::function<double(double, double, double)>& kernel, const RealField3D& f) {
  const auto& b = f.box;
  const int n = b.n, P = 2 * n, Ph = n + 1;
  const double h = b.h();
  std::vector<double> Kp(static_cast<size_t>(P) * P * P, 0.0), pad(Kp.size(), 0.0);
  auto sep = [&](int p) { return p < n ? p : p - P; };
  for (int p0 = 0; p0 < P; ++p0)
    for (int p1 = 0; p1 < P; ++p1)
      for (int p2 = 0; p2 < P; ++p2) {
        const int s0 = sep(p0), s1 = sep(p1), s2 = sep(p2);
        if (s0 == 0 && s1 == 0 && s2 == 0) continue;
        Kp[(static_cast<size_t>(p0) * P + p1) * P + p2] = kernel(s0 * h, s1 * h, s2 * h);
      }
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) pad[(static_cast<size_t>(a) * P + c) * P + k] = f(a, c, k);
  std::vector<std::complex<double>> K(static_cast<size_t>(P) * P * Ph), F(K.size());
  fft::box_r2c(Kp.data(), K.data(), P, P, P);
  fft::box_r2c(pad.data(), F.data(), P, P, P);
  const double norm = h * h * h / (static_cast<double>(P) * P * P);
  for (size_t k = 0; k < F.size(); ++k) F[k] *= K[k] * norm;
  fft::box_c2r(F.data(), pad.data(), P, P, P);
  RealField3D out(b);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) out(a, c, k) = pad[(static_cast<size_t>(a) * P + c) * P + k];
  return out;
}

SyReport check_sy_bound(const RealField3D& g, const RealField3D& u) {
  RealField3D absg(g.box);
  for (size_t k = 0; k < g.v.size(); ++k) absg.v[k] = std::abs(g.v[k]);
  auto den = discrete_convolution([](double x, double y, double z) { return 1.0 / (x * x + y * y + z * z); }, absg);
  SyReport r;
  for (size_t k = 0; k < u.v.size(); ++k) {
    if (!(den.v[k] >= 1e-14)) {
      ++r.skipped;
      continue;
    }
    ++r.valid_points;
    r.max_ratio = std::max(r.max_ratio, std::abs(u.v[k]) / den.v[k]);
  }
  if (!std::isfinite(r.max_ratio)) throw std::runtime_error("check_sy_bound: non-finite ratio");
  return r;
}

// ------------------------------------------------------------ harnesses

double AxisymProfile::value(double r, double z) const {
  double v = 0.0;
  for (const auto& b : blobs) v += (b.a + b.b * r * r) * std::exp(-(r * r + (z - b.zc) * (z - b.zc)) / (b.s * b.s));
  return v;
}

double AxisymProfile::d_r(double r, double z) const {
  double v = 0.0;
  for (const auto& b : blobs) {
    const double e = std::exp(-(r * r + (z - b.zc) * (z - b.zc)) / (b.s * b.s));
    v += (2.0 * b.b * r - 2.0 * r * (b.a + b.b * r * r) / (b.s * b.s)) * e;
  }
  return v;
}

AxisymProfile random_axisym_profile(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  AxisymProfile p;
  for (int k = 0; k < 3; ++k) {
    AxisymProfile::Blob b;
    b.a = -1.0 + 2.0 * U(rng);
    b.b = -0.5 + U(rng);
    b.zc = -1.0 + 2.0 * U(rng);
    b.s = 0.8 + 0.4 * U(rng);
    p.blobs.push_back(b);
  }
  return p;
}

const char* to_string(IdentityLemma l) {
  switch (l) {
    case IdentityLemma::UrSup: return "ur_sup";
    case IdentityLemma::DzUr: return "dz_ur";
    case IdentityLemma::UrL6: return "ur_l6";
    case IdentityLemma::DrOverR: return "dr_over_r";
    case IdentityLemma::KernelBound: return "kernel_bound";
  }
  return "?";
}

HarnessResult identity_harness(IdentityLemma which, int samples, std::uint64_t seed, const BoxSpec& box) {
  HarnessResult res;
  res.lemma = to_string(which);
  IdentityEvaluator ev(box, Domain::FreeSpace);
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t sd = seed + static_cast<std::uint64_t>(s);
    const auto prof = random_axisym_profile(sd);
    auto g = sample_axisymmetric(box, [&](double r, double z) { return prof.value(r, z); });
    double lhs = 0.0, rhs = 0.0;
    switch (which) {
      case IdentityLemma::UrSup: {
        auto u = ev.ur_over_r(g, {0, 0, 0}, false);
        auto gr = sample_axisymmetric(box, [&](double r, double z) { return prof.d_r(r, z); });
        lhs = box_max_abs(u);
        rhs = std::sqrt(box_lp_norm(g, 2.0) * box_lp_norm(gr, 2.0));
        break;
      }
      case IdentityLemma::DzUr: {
        lhs = box_lp_norm(ev.ur_over_r(g, {0, 0, 1}, false), 2.0);
        rhs = box_lp_norm(g, 2.0);
        break;
      }
      case IdentityLemma::UrL6: {
        lhs = box_lp_norm(ev.ur_over_r(g, {0, 0, 0}, false), 6.0);
        rhs = box_lp_norm(g, 2.0);
        break;
      }
      case IdentityLemma::DrOverR: {
        lhs = box_lp_norm(ev.dr_over_r_inv_laplacian(g, false), 2.0);
        rhs = box_lp_norm(g, 2.0);
        break;
      }
      case IdentityLemma::KernelBound: {
        auto sy = check_sy_bound(g, ev.ur_over_r(g, {0, 0, 0}, false));
        lhs = sy.max_ratio;
        rhs = 1.0;
        break;
      }
    }
    res.add(res.lemma, sd, lhs, rhs);
  }
  return res;
}

}  // namespace bsq
