#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "bsq/kernels.hpp"
#include "doctest.h"

using namespace bsq;

namespace {
struct Tri {
  std::vector<double> a, b, c;
};
Tri random_dominant(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  Tri t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    t.a[i] = i > 0 ? U(rng) : 0.0;
    t.c[i] = i + 1 < n ? U(rng) : 0.0;
    t.b[i] = 3.0 + U(rng);
  }
  return t;
}
}  // namespace

TEST_CASE("Thomas solve reproduces the tridiagonal product") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (int n : {1, 2, 7, 64}) {
    auto t = random_dominant(n, rng);
    auto f = tri_factor(t.a, t.b, t.c);
    std::vector<double> x(n), rhs(n);
    for (auto& v : x) v = N(rng);
    for (int i = 0; i < n; ++i)
      rhs[i] = t.b[i] * x[i] + (i > 0 ? t.a[i] * x[i - 1] : 0.0) + (i + 1 < n ? t.c[i] * x[i + 1] : 0.0);
    tri_solve(f, rhs.data(), 1);
    for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-13));
  }
}

TEST_CASE("singular systems are reported with the failing row") {
  std::vector<double> a{0, 1, 1}, b{1, 1, 2}, c{1, 1, 0};  // second pivot is 1 - 1 = 0
  try {
    tri_factor(a, b, c);
    FAIL("expected SingularSystem");
  } catch (const SingularSystem& e) {
    CHECK(e.row == 1);
    CHECK(std::abs(e.pivot) < 1e-14);
  }
}

TEST_CASE("parallel kernels match their serial twins bit for bit") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  auto t = random_dominant(33, rng);
  auto f = tri_factor(t.a, t.b, t.c);
  const int cols = 130;
  std::vector<double> x(33 * cols);
  for (auto& v : x) v = N(rng);
  auto y = x;
  tri_solve_columns(f, x.data(), cols, Exec::Parallel);
  tri_solve_columns_serial(f, y.data(), cols);
  CHECK(x == y);

  std::vector<std::complex<double>> c1(1000), c2;
  std::vector<double> m(1000);
  for (size_t k = 0; k < c1.size(); ++k) {
    c1[k] = {N(rng), N(rng)};
    m[k] = N(rng);
  }
  c2 = c1;
  multiply_inplace(c1.data(), m.data(), m.size(), Exec::Parallel);
  multiply_inplace_serial(c2.data(), m.data(), m.size());
  CHECK(c1 == c2);

  std::vector<double> v(17 * 40), w(17);
  for (auto& e : v) e = N(rng);
  for (auto& e : w) e = N(rng);
  CHECK(weighted_row_sum(v.data(), w.data(), 17, 40, Exec::Parallel) ==
        weighted_row_sum(v.data(), w.data(), 17, 40, Exec::Serial));
}

TEST_CASE("pairwise summation") {
  CHECK(pairwise_sum(nullptr, 0) == 0.0);
  std::vector<double> ones(1001, 1.0);
  CHECK(pairwise_sum(ones.data(), ones.size()) == 1001.0);
  std::vector<double> tiny(1 << 20, 0.1);
  CHECK(std::abs(pairwise_sum(tiny.data(), tiny.size()) - 0.1 * (1 << 20)) < 1e-8);
}

TEST_CASE("BSQ_THREADS caps the team and default execution can be switched") {
  setenv("BSQ_THREADS", "1", 1);
  CHECK(apply_thread_cap_from_env() == 1);
  CHECK(omp_get_max_threads() == 1);
  setenv("BSQ_THREADS", "junk", 1);
  CHECK(apply_thread_cap_from_env() == 1);
  const Exec before = default_exec();
  set_default_exec(Exec::Serial);
  CHECK(default_exec() == Exec::Serial);
  set_default_exec(before);
}
