#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "bsq/oracle.hpp"
#include "bsq/poisson.hpp"
#include "doctest.h"

using namespace bsq;
constexpr double kPi = std::numbers::pi;

namespace {
ScalarField2D random_field2d(GridPtr g, Parity p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  ScalarField2D f(g, p);
  for (auto& v : f.v) v = N(rng);
  return f;
}
double rel_diff(const ScalarField2D& a, const ScalarField2D& b) {
  return lp_norm(axpy(-1.0, a, b), 2.0) / lp_norm(b, 2.0);
}
}  // namespace

TEST_CASE("zero vorticity gives zero streamfunction and velocity") {
  auto g = make_grid(16, 16, 1.0, 1.0);
  auto psi = solve_streamfunction(ScalarField2D(g, Parity::Odd));
  for (double v : psi.v) CHECK(v == 0.0);
  auto u = velocity_from_streamfunction(psi);
  CHECK(max_abs(u.ur) == 0.0);
  CHECK(max_abs(u.uz) == 0.0);
  CHECK(max_abs(ur_over_r(u)) == 0.0);
}

TEST_CASE("tridiagonal solve matches the dense oracle on 8x8") {
  auto g = make_grid(8, 8, 1.5, 2.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto om = random_field2d(g, Parity::Odd, seed);
    auto fast = solve_streamfunction(om);
    auto dense = oracle::dense_poisson(om);
    CHECK(rel_diff(fast, dense) <= 1e-10);
  }
}

TEST_CASE("discrete residual and linearity") {
  auto g = make_grid(64, 32, 2.0, 3.0);
  auto ws = make_stream_workspace(g);
  CHECK(ws.modes.size() == static_cast<size_t>(g->nz / 2 + 1));
  for (const auto& m : ws.modes) CHECK(std::abs(m.min_pivot) > 1e-14);
  auto w1 = random_field2d(g, Parity::Odd, 11), w2 = random_field2d(g, Parity::Odd, 12);
  auto A1 = solve_psi_over_r(w1, ws);
  CHECK(stream_residual(w1, A1) <= 1e-10);
  auto lhs = solve_streamfunction(axpy(2.0, w1, scaled(-3.0, w2)), ws);
  auto rhs = axpy(2.0, solve_streamfunction(w1, ws), scaled(-3.0, solve_streamfunction(w2, ws)));
  CHECK(rel_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("parallel and serial solves agree bitwise") {
  auto g = make_grid(48, 32, 2.0, 3.0);
  auto ws = make_stream_workspace(g);
  auto w = random_field2d(g, Parity::Odd, 5);
  CHECK(solve_psi_over_r(w, ws, Exec::Serial).v == solve_psi_over_r(w, ws, Exec::Parallel).v);
}

TEST_CASE("manufactured psi* = r^2 (R^2 - r^2) sin(2 pi z / Lz) recovered at second order") {
  const double R = 1.0, Lz = 2.0, k = 2 * kPi / Lz;
  auto psi_ex = [&](double r, double z) { return r * r * (R * R - r * r) * std::sin(k * z); };
  // L psi = psi_rr - psi_r / r + psi_zz
  auto Lpsi = [&](double r, double z) {
    const double f = r * r * (R * R - r * r), fr = 2 * r * R * R - 4 * r * r * r, frr = 2 * R * R - 12 * r * r;
    return (frr - fr / r - k * k * f) * std::sin(k * z);
  };
  std::vector<double> err;
  for (int nr : {32, 64, 128}) {
    auto g = make_grid(nr, 16, R, Lz);
    auto om = sample(g, Parity::Odd, [&](double r, double z) { return -Lpsi(r, z) / r; });
    auto ex = sample(g, Parity::Even, psi_ex);
    err.push_back(rel_diff(solve_streamfunction(om), ex));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("velocity of psi = r^2 sin(2 pi z / Lz) is stencil-exact") {
  auto g = make_grid(16, 16, 1.0, 2.0);
  const double k = 2 * kPi / g->Lz;
  auto psi = sample(g, Parity::Even, [&](double r, double z) { return r * r * std::sin(k * z); });
  auto u = velocity_from_streamfunction(psi);
  CHECK(u.ur.parity == Parity::Odd);
  CHECK(u.uz.parity == Parity::Even);
  double er = 0, ez = 0;
  for (int i = 0; i < g->nr; ++i)
    for (int j = 0; j < g->nz; ++j) {
      er = std::max(er, std::abs(u.ur(i, j) + k * g->r[i] * std::cos(k * g->z[j])));
      ez = std::max(ez, std::abs(u.uz(i, j) - 2 * std::sin(k * g->z[j])));
    }
  CHECK(er < 1e-12);
  CHECK(ez < 1e-12);
  auto q = ur_over_r(u);
  CHECK(q.parity == Parity::Even);
  for (int i = 0; i < g->nr; ++i) CHECK(q(i, 4) == doctest::Approx(-k * std::cos(k * g->z[4])).epsilon(1e-12));
}

TEST_CASE("divergence is at rounding level for 50 random smooth psi") {
  auto g = make_grid(32, 32, 2.0, 4.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = 0;
  for (int s = 0; s < 50; ++s) {
    const double a = U(rng), b = 0.5 + 0.5 * std::abs(U(rng)), c = U(rng);
    const int m = 1 + s % 4;
    auto psi = sample(g, Parity::Even, [&](double r, double z) {
      return r * r * std::exp(-b * r * r) * (a * std::sin(m * kPi * z / 2) + c * std::cos(kPi * z / 2));
    });
    worst = std::max(worst, relative_divergence(velocity_from_streamfunction(psi)));
  }
  CHECK(worst <= 100 * 2.220446049250313e-16);
}

TEST_CASE("round trip curl reproduces omega at second order") {
  auto om_f = [](double r, double z) { return r * std::exp(-r * r) * std::sin(z); };
  std::vector<double> err;
  for (int nr : {64, 128, 256}) {
    auto g = make_grid(nr, 32, 6.0, 2 * kPi);
    auto om = sample(g, Parity::Odd, om_f);
    auto c = curl_theta(velocity_from_streamfunction(solve_streamfunction(om)));
    double e = 0;
    for (int i = 0; i < nr; ++i)
      if (g->r[i] >= 0.5 && g->r[i] <= 4.0)
        for (int j = 0; j < g->nz; ++j) e = std::max(e, std::abs(c(i, j) - om(i, j)));
    err.push_back(e);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("ur_over_r divides exactly") {
  auto g = make_grid(8, 8, 1.0, 1.0);
  VelocityField2D u{sample(g, Parity::Odd, [](double r, double z) { return r * std::cos(6 * z); }),
                    ScalarField2D(g, Parity::Even)};
  auto q = ur_over_r(u);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(q(i, j) == doctest::Approx(std::cos(6 * g->z[j])).epsilon(1e-15));
}

TEST_CASE("even Poisson solve recovers a manufactured potential") {
  auto phi = [](double r, double z) { return std::exp(-2 * r * r) * std::cos(z); };
  auto lap = [](double r, double z) {
    const double e = std::exp(-2 * r * r);
    return (16 * r * r - 8) * e * std::cos(z) - e * std::cos(z);
  };
  std::vector<double> err;
  for (int nr : {32, 64}) {
    auto g = make_grid(nr, 16, 5.0, 2 * kPi);
    auto sol = solve_poisson_even(sample(g, Parity::Even, lap));
    err.push_back(rel_diff(sol, sample(g, Parity::Even, phi)));
  }
  CHECK(err[1] < 1e-2);
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
}
