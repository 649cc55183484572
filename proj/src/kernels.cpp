#include "bsq/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

namespace bsq {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
constexpr int kColBlock = 64;
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

int apply_thread_cap_from_env() {
  const char* s = std::getenv("BSQ_THREADS");
  if (s && *s) {
    int n = std::atoi(s);
    if (n >= 1) omp_set_num_threads(n);
  }
  return omp_get_max_threads();
}

TriFactor tri_factor(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& c, double pivot_floor) {
  TriFactor f;
  f.n = static_cast<int>(b.size());
  f.lower = a;
  f.cprime.assign(f.n, 0.0);
  f.inv_pivot.assign(f.n, 0.0);
  double piv = b[0];
  f.min_pivot = std::abs(piv);
  for (int i = 0; i < f.n; ++i) {
    if (i > 0) piv = b[i] - a[i] * f.cprime[i - 1];
    f.min_pivot = std::min(f.min_pivot, std::abs(piv));
    if (!(std::abs(piv) > pivot_floor))
      throw SingularSystem("tridiagonal pivot below floor at row " + std::to_string(i), i, piv);
    f.inv_pivot[i] = 1.0 / piv;
    f.cprime[i] = (i + 1 < f.n) ? c[i] * f.inv_pivot[i] : 0.0;
  }
  return f;
}

static void solve_block(const TriFactor& f, double* x, int ncols, int j0, int j1) {
  const int n = f.n;
  for (int j = j0; j < j1; ++j) x[j] *= f.inv_pivot[0];
  for (int i = 1; i < n; ++i) {
    double* xi = x + static_cast<std::size_t>(i) * ncols;
    const double* xm = xi - ncols;
    const double l = f.lower[i], ip = f.inv_pivot[i];
    for (int j = j0; j < j1; ++j) xi[j] = (xi[j] - l * xm[j]) * ip;
  }
  for (int i = n - 2; i >= 0; --i) {
    double* xi = x + static_cast<std::size_t>(i) * ncols;
    const double* xp = xi + ncols;
    const double cp = f.cprime[i];
    for (int j = j0; j < j1; ++j) xi[j] -= cp * xp[j];
  }
}

void tri_solve_columns_serial(const TriFactor& f, double* x, int ncols) {
  solve_block(f, x, ncols, 0, ncols);
}

void tri_solve_columns(const TriFactor& f, double* x, int ncols, Exec e) {
  if (e == Exec::Serial) return tri_solve_columns_serial(f, x, ncols);
  const int nb = (ncols + kColBlock - 1) / kColBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < nb; ++b)
    solve_block(f, x, ncols, b * kColBlock, std::min(ncols, (b + 1) * kColBlock));
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double weighted_row_sum(const double* v, const double* w, int nrows, int ncols, Exec e) {
  std::vector<double> rows(nrows);
  if (e == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nrows; ++i)
      rows[i] = w[i] * pairwise_sum(v + static_cast<std::size_t>(i) * ncols, ncols);
  } else {
    for (int i = 0; i < nrows; ++i)
      rows[i] = w[i] * pairwise_sum(v + static_cast<std::size_t>(i) * ncols, ncols);
  }
  return pairwise_sum(rows.data(), rows.size());
}

void multiply_inplace_serial(std::complex<double>* c, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] *= m[i];
}

void multiply_inplace(std::complex<double>* c, const double* m, std::size_t n, Exec e) {
  if (e == Exec::Serial) return multiply_inplace_serial(c, m, n);
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nn; ++i) c[i] *= m[i];
}

}  // namespace bsq
