#pragma once
// Cell-centred cubic box shared by the harmonic, lp and oracle modules.
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bsq {

struct BoxSpec {
  int n = 0;       // points (= modes) per axis, power of 2
  double L = 0.0;  // side length
  double h() const { return L / n; }
  double x(int i) const { return -0.5 * L + (i + 0.5) * h(); }
  // signed mode index for FFT position m: 0..n/2, then -n/2+1..-1
  int mode(int m) const { return m <= n / 2 ? m : m - n; }
  double k(int m) const;  // 2 pi mode(m) / L
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t idx(int a, int b, int c) const { return (static_cast<std::size_t>(a) * n + b) * n + c; }
  bool operator==(const BoxSpec& o) const { return n == o.n && L == o.L; }
};

BoxSpec make_box(int n, double L);

struct RealField3D {
  BoxSpec box;
  std::vector<double> v;
  RealField3D() = default;
  explicit RealField3D(const BoxSpec& b) : box(b), v(b.size(), 0.0) {}
  double& operator()(int a, int b, int c) { return v[box.idx(a, b, c)]; }
  double operator()(int a, int b, int c) const { return v[box.idx(a, b, c)]; }
};

RealField3D sample_box(const BoxSpec& b, const std::function<double(double, double, double)>& f);
// f(r, z) on r = sqrt(x1^2 + x2^2), z = x3
RealField3D sample_axisymmetric(const BoxSpec& b, const std::function<double(double, double)>& f);

// (h^3 sum |f|^p)^(1/p), max for p = inf
double box_lp_norm(const RealField3D& f, double p);
double box_integral(const RealField3D& f);
double box_max_abs(const RealField3D& f);

RealField3D operator+(const RealField3D& a, const RealField3D& b);
RealField3D operator-(const RealField3D& a, const RealField3D& b);
RealField3D operator*(double s, const RealField3D& a);
RealField3D pointwise(const RealField3D& a, const RealField3D& b);

// relative L2 difference ||a-b|| / ||b||
double relative_l2(const RealField3D& a, const RealField3D& b);

}  // namespace bsq
