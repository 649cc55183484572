#include "bsq/box.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bsq/kernels.hpp"

namespace bsq {

double BoxSpec::k(int m) const { return 2.0 * std::numbers::pi * mode(m) / L; }

BoxSpec make_box(int n, double L) {
  if (n < 8 || (n & (n - 1)) != 0) throw std::invalid_argument("BoxSpec: n must be a power of 2 >= 8, got " + std::to_string(n));
  if (!(L > 0.0)) throw std::invalid_argument("BoxSpec: L must be positive");
  return BoxSpec{n, L};
}

RealField3D sample_box(const BoxSpec& b, const std::function<double(double, double, double)>& f) {
  RealField3D out(b);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j)
      for (int k = 0; k < b.n; ++k) out(i, j, k) = f(b.x(i), b.x(j), b.x(k));
  return out;
}

RealField3D sample_axisymmetric(const BoxSpec& b, const std::function<double(double, double)>& f) {
  RealField3D out(b);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      const double r = std::hypot(b.x(i), b.x(j));
      for (int k = 0; k < b.n; ++k) out(i, j, k) = f(r, b.x(k));
    }
  return out;
}

double box_lp_norm(const RealField3D& f, double p) {
  if (std::isinf(p)) return box_max_abs(f);
  std::vector<double> a(f.v.size());
  for (size_t k = 0; k < a.size(); ++k) a[k] = p == 2.0 ? f.v[k] * f.v[k] : std::pow(std::abs(f.v[k]), p);
  const double h3 = std::pow(f.box.h(), 3);
  const double s = h3 * pairwise_sum(a.data(), a.size());
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double box_integral(const RealField3D& f) { return std::pow(f.box.h(), 3) * pairwise_sum(f.v.data(), f.v.size()); }

double box_max_abs(const RealField3D& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

RealField3D operator+(const RealField3D& a, const RealField3D& b) {
  RealField3D o(a.box);
  for (size_t k = 0; k < o.v.size(); ++k) o.v[k] = a.v[k] + b.v[k];
  return o;
}
RealField3D operator-(const RealField3D& a, const RealField3D& b) {
  RealField3D o(a.box);
  for (size_t k = 0; k < o.v.size(); ++k) o.v[k] = a.v[k] - b.v[k];
  return o;
}
RealField3D operator*(double s, const RealField3D& a) {
  RealField3D o(a.box);
  for (size_t k = 0; k < o.v.size(); ++k) o.v[k] = s * a.v[k];
  return o;
}
RealField3D pointwise(const RealField3D& a, const RealField3D& b) {
  RealField3D o(a.box);
  for (size_t k = 0; k < o.v.size(); ++k) o.v[k] = a.v[k] * b.v[k];
  return o;
}

double relative_l2(const RealField3D& a, const RealField3D& b) {
  const double d = box_lp_norm(a - b, 2.0), n = box_lp_norm(b, 2.0);
  return n > 0.0 ? d / n : d;
}

}  // namespace bsq
