// Free-space convolution with truncated Green's functions: the symbol of
// Delta^{-m} is replaced by the transform of its kernel cut off at |x| = D,
// which is smooth at k = 0, so a trapezoid rule on a 4x-oversampled k grid
// gives the kernel samples (DCT-I / DST-I per axis parity).
#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "bsq/fft.hpp"
#include "bsq/harmonic.hpp"

namespace bsq {

namespace {

// FT of -1/(4 pi |x|) restricted to |x| < D
double green1(double k, double D) {
  const double x = k * D;
  if (x < 0.2) {
    const double x2 = x * x;
    return -D * D * (0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 40320.0);
  }
  return -(1.0 - std::cos(x)) / (k * k);
}

// FT of -|x|/(8 pi) restricted to |x| < D
double green2(double k, double D) {
  const double x = k * D;
  if (x < 0.2) {
    const double D2 = D * D, D4 = D2 * D2, k2 = k * k;
    return -0.5 * (D4 / 4.0 - k2 * D4 * D2 / 36.0 + k2 * k2 * D4 * D4 / 960.0 -
                   k2 * k2 * k2 * D4 * D4 * D2 / 50400.0);
  }
  const double c = std::cos(x), s = std::sin(x), k3 = k * k * k;
  const double integral = -D * D * c / k + 2.0 * D * s / (k * k) + 2.0 * c / k3 - 2.0 / k3;
  return -integral / (2.0 * k);
}

}  // namespace

FreeSpaceConvolver::FreeSpaceConvolver(const BoxSpec& box) : box_(box), D_(std::sqrt(3.0) * box.L * 1.0001) {}

std::vector<double> FreeSpaceConvolver::kernel_samples(const Monomial& m) {
  if (m.inv_lap < 1 || m.inv_lap > 2)
    throw std::invalid_argument("FreeSpaceConvolver: only Delta^{-1} and Delta^{-2} compositions are supported");
  const int n = box_.n;
  const double dk = 2.0 * std::numbers::pi / (4.0 * box_.L);
  int M[3], kind[3];
  bool odd[3];
  int n_odd = 0;
  for (int a = 0; a < 3; ++a) {
    odd[a] = m.alpha[a] % 2 == 1;
    n_odd += odd[a];
    M[a] = odd[a] ? 2 * n - 1 : 2 * n + 1;
    kind[a] = odd[a] ? FFTW_RODFT00 : FFTW_REDFT00;
  }
  auto kval = [&](int a, int j) { return (odd[a] ? j + 1 : j) * dk; };
  std::vector<double> X(static_cast<size_t>(M[0]) * M[1] * M[2]);
  for (int i = 0; i < M[0]; ++i) {
    const double k1 = kval(0, i);
    for (int j = 0; j < M[1]; ++j) {
      const double k2 = kval(1, j);
      for (int l = 0; l < M[2]; ++l) {
        const double k3 = kval(2, l);
        const double kk = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        double s = m.inv_lap == 1 ? green1(kk, D_) : green2(kk, D_);
        s *= std::pow(k1, m.alpha[0]) * std::pow(k2, m.alpha[1]) * std::pow(k3, m.alpha[2]);
        X[(static_cast<size_t>(i) * M[1] + j) * M[2] + l] = s;
      }
    }
  }
  fft::box_r2r(X.data(), M[0], M[1], M[2], kind[0], kind[1], kind[2]);
  // i^{|alpha| + n_odd} is real
  const int q = (m.order() + n_odd) / 2;
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  const double scale = sign * std::pow(dk / (2.0 * std::numbers::pi), 3);
  std::vector<double> K(static_cast<size_t>(n + 1) * (n + 1) * (n + 1));
  auto pick = [&](int a, int s) -> int { return odd[a] ? s - 1 : s; };  // output index for separation s
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int l = 0; l <= n; ++l) {
        double v = 0.0;
        if (!((odd[0] && i == 0) || (odd[1] && j == 0) || (odd[2] && l == 0)))
          v = scale * X[(static_cast<size_t>(pick(0, i)) * M[1] + pick(1, j)) * M[2] + pick(2, l)];
        K[(static_cast<size_t>(i) * (n + 1) + j) * (n + 1) + l] = v;
      }
  return K;
}

const std::vector<std::complex<double>>& FreeSpaceConvolver::spectrum(const Monomial& m) {
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  const int n = box_.n, P = 2 * n, Ph = P / 2 + 1;
  auto K = kernel_samples(m);
  bool odd[3];
  for (int a = 0; a < 3; ++a) odd[a] = m.alpha[a] % 2 == 1;
  std::vector<double> Kp(static_cast<size_t>(P) * P * P, 0.0);
  auto sep = [&](int p, int a, double& sgn) {
    if (p < n) return p;
    sgn *= odd[a] ? -1.0 : 1.0;
    return P - p;
  };
  for (int p0 = 0; p0 < P; ++p0)
    for (int p1 = 0; p1 < P; ++p1)
      for (int p2 = 0; p2 < P; ++p2) {
        if (p0 == n || p1 == n || p2 == n) continue;  // never reached by in-box separations
        double sgn = 1.0;
        const int s0 = sep(p0, 0, sgn), s1 = sep(p1, 1, sgn), s2 = sep(p2, 2, sgn);
        Kp[(static_cast<size_t>(p0) * P + p1) * P + p2] =
            sgn * K[(static_cast<size_t>(s0) * (n + 1) + s1) * (n + 1) + s2];
      }
  std::vector<std::complex<double>> spec(static_cast<size_t>(P) * P * Ph);
  fft::box_r2c(Kp.data(), spec.data(), P, P, P);
  const double norm = std::pow(box_.h(), 3) / (static_cast<double>(P) * P * P);
  for (auto& c : spec) c *= norm;
  return cache_.emplace(m, std::move(spec)).first->second;
}

std::vector<RealField3D> FreeSpaceConvolver::apply_many(const std::vector<Monomial>& ms, const RealField3D& f) {
  if (!(f.box == box_)) throw std::invalid_argument("FreeSpaceConvolver: box mismatch");
  const int n = box_.n, P = 2 * n, Ph = P / 2 + 1;
  std::vector<double> pad(static_cast<size_t>(P) * P * P, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) pad[(static_cast<size_t>(a) * P + b) * P + c] = f(a, b, c);
  std::vector<std::complex<double>> F(static_cast<size_t>(P) * P * Ph), G(F.size());
  fft::box_r2c(pad.data(), F.data(), P, P, P);
  std::vector<RealField3D> out;
  for (const auto& m : ms) {
    const auto& S = spectrum(m);
    const std::ptrdiff_t N = static_cast<std::ptrdiff_t>(F.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < N; ++k) G[k] = F[k] * S[k];
    fft::box_c2r(G.data(), pad.data(), P, P, P);
    RealField3D r(box_);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) r(a, b, c) = pad[(static_cast<size_t>(a) * P + b) * P + c];
    out.push_back(std::move(r));
  }
  return out;
}

RealField3D FreeSpaceConvolver::apply(const Monomial& m, const RealField3D& f) { return apply_many({m}, f)[0]; }

}  // namespace bsq
