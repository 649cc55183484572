#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "bsq/oracle.hpp"
#include "bsq/poisson.hpp"
#include "doctest.h"

using namespace bsq;
constexpr double kPi = std::numbers::pi;

TEST_CASE("dense Poisson: zero, size guard, agreement with the banded solver") {
  auto g = make_grid(8, 8, 2.0, 3.0);
  auto z = oracle::dense_poisson(ScalarField2D(g, Parity::Odd));
  for (double v : z.v) CHECK(v == 0.0);
  CHECK_THROWS_AS(oracle::dense_poisson(ScalarField2D(make_grid(32, 8, 1, 1), Parity::Odd)), std::invalid_argument);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField2D om(g, Parity::Odd);
    for (auto& v : om.v) v = N(rng);
    auto a = oracle::dense_poisson(om), b = solve_streamfunction(om);
    double num = 0, den = 0;
    for (size_t k = 0; k < a.v.size(); ++k) {
      num = std::max(num, std::abs(a.v[k] - b.v[k]));
      den = std::max(den, std::abs(a.v[k]));
    }
    CHECK(num <= 1e-10 * den);
  }
}

TEST_CASE("dense Poisson recovers a manufactured streamfunction at second order") {
  // psi = r^2 exp(-r^2) cos z: omega = -(d_rr - (1/r) d_r + d_zz) psi / r
  auto psi = [](double r, double z) { return r * r * std::exp(-r * r) * std::cos(z); };
  auto om = [](double r, double z) {
    const double e = std::exp(-r * r);
    const double prr = (2 - 10 * r * r + 4 * r * r * r * r) * e, pr = (2 * r - 2 * r * r * r) * e;
    return -(prr - pr / r - r * r * e) * std::cos(z) / r;
  };
  std::vector<double> err;
  for (int nr : {8, 16}) {
    auto g = make_grid(nr, 8, 4.0, 2 * kPi);
    auto s = oracle::dense_poisson(sample(g, Parity::Odd, om));
    double e = 0;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < 8; ++j) e = std::max(e, std::abs(s(i, j) - psi(g->r[i], g->z[j])));
    err.push_back(e);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.8);
}

TEST_CASE("quadrature norm: constants, Gaussian, non-convergence flag") {
  auto c = oracle::quadrature_norm([](double, double) { return 2.0; }, 2.0, 3.0, 5.0);
  CHECK(c.converged);
  CHECK(c.value == doctest::Approx(2.0 * std::sqrt(kPi * 9.0 * 5.0)).epsilon(1e-12));
  const double R = 5.0, Lz = 2.0;
  auto gs = oracle::quadrature_norm([](double r, double) { return std::exp(-r * r); }, 2.0, R, Lz);
  const double exact = std::sqrt(Lz * kPi / 2 * (1 - std::exp(-2 * R * R)));
  CHECK(gs.converged);
  CHECK(gs.value == doctest::Approx(exact).epsilon(1e-8));
  auto sing = oracle::quadrature_norm([](double r, double) { return std::pow(r, -0.95); }, 2.0, 1.0, 1.0);
  CHECK_FALSE(sing.converged);
}

TEST_CASE("quadrature norm of the compact bump in L6 is a reference for the grid norm") {
  auto bump = [](double r, double z) {
    const double q = std::hypot(r, z - 1.0);
    return q < 1 ? std::exp(1 - 1 / (1 - q * q)) : 0.0;
  };
  auto q = oracle::quadrature_norm(bump, 6.0, 1.5, 2.0);
  CHECK(q.converged);
  CHECK(lp_norm(sample(make_grid(1024, 1024, 1.5, 2.0), Parity::Even, bump), 6.0) == doctest::Approx(q.value).epsilon(1e-5));
}

TEST_CASE("direct convolution: zero input, delta response") {
  const auto b = make_box(8, 1.0);
  auto k = [](double x, double y, double z) { return 1.0 / (x * x + y * y + z * z); };
  CHECK(box_max_abs(oracle::direct_convolution(k, RealField3D(b))) == 0.0);
  RealField3D d(b);
  d(2, 3, 4) = 1.0;
  auto out = oracle::direct_convolution(k, d);
  const double h = b.h();
  CHECK(out(2, 3, 4) == 0.0);
  CHECK(out(5, 3, 4) == doctest::Approx(h * h * h * k(3 * h, 0, 0)).epsilon(1e-14));
  CHECK(out(0, 0, 0) == doctest::Approx(h * h * h * k(-2 * h, -3 * h, -4 * h)).epsilon(1e-14));
}

TEST_CASE("manufactured solution: forcing residual and field consistency") {
  oracle::ManufacturedSolution m;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.3, 2.5);
  for (int trial = 0; trial < 3; ++trial) {
    const double r = U(rng), z = U(rng), t = U(rng) / 3;
    CHECK(m.forcing_residual(r, z, t) <= 1e-6);
    const double e = 1e-5;
    const double dpsi_z = (m.psi(r, z + e, t) - m.psi(r, z - e, t)) / (2 * e);
    const double dpsi_r = (m.psi(r + e, z, t) - m.psi(r - e, z, t)) / (2 * e);
    CHECK(m.ur(r, z, t) == doctest::Approx(-dpsi_z / r).epsilon(1e-7));
    CHECK(m.uz(r, z, t) == doctest::Approx(dpsi_r / r).epsilon(1e-7));
    const double dur_z = (m.ur(r, z + e, t) - m.ur(r, z - e, t)) / (2 * e);
    const double duz_r = (m.uz(r + e, z, t) - m.uz(r - e, z, t)) / (2 * e);
    CHECK(m.omega(r, z, t) == doctest::Approx(dur_z - duz_r).epsilon(1e-6));
  }
  auto g = make_grid(8, 8, 6.0, 2 * kPi);
  auto om = m.omega_on(g, 0.5);
  CHECK(om.parity == Parity::Odd);
  CHECK(om(3, 2) == m.omega(g->r[3], g->z[2], 0.5));
  CHECK(m.rho_on(g, 0.5).parity == Parity::Even);
}
