#pragma once
// Hot loops shared by the modules. Every parallel kernel has a serial twin
// with the same arithmetic order so results match bit for bit.
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsq {

enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec e);
// Reads BSQ_THREADS and caps the OpenMP team; returns the cap in effect.
int apply_thread_cap_from_env();

struct SingularSystem : std::runtime_error {
  int row;
  double pivot;
  SingularSystem(const std::string& what, int row_, double pivot_)
      : std::runtime_error(what), row(row_), pivot(pivot_) {}
};

// Thomas factorization of a tridiagonal matrix: sub a (a[0] unused),
// diagonal b, super c (c[n-1] unused).
struct TriFactor {
  int n = 0;
  std::vector<double> lower;
  std::vector<double> cprime;
  std::vector<double> inv_pivot;
  double min_pivot = 0.0;
};

TriFactor tri_factor(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& c, double pivot_floor = 1e-14);

template <class T>
void tri_solve(const TriFactor& f, T* x, std::ptrdiff_t stride) {
  const int n = f.n;
  x[0] = x[0] * f.inv_pivot[0];
  for (int i = 1; i < n; ++i)
    x[i * stride] = (x[i * stride] - f.lower[i] * x[(i - 1) * stride]) * f.inv_pivot[i];
  for (int i = n - 2; i >= 0; --i)
    x[i * stride] = x[i * stride] - f.cprime[i] * x[(i + 1) * stride];
}

// Same matrix applied to every column of a row-major (f.n x ncols) block.
void tri_solve_columns(const TriFactor& f, double* x, int ncols, Exec e);
void tri_solve_columns_serial(const TriFactor& f, double* x, int ncols);

// Fixed-order pairwise summation (reproducible regardless of threads).
double pairwise_sum(const double* x, std::size_t n);
// sum_i w[i] * (pairwise sum of row i); rows of length ncols.
double weighted_row_sum(const double* v, const double* w, int nrows, int ncols, Exec e);

// Pointwise c[i] *= m[i].
void multiply_inplace(std::complex<double>* c, const double* m, std::size_t n, Exec e);
void multiply_inplace_serial(std::complex<double>* c, const double* m, std::size_t n);

}  // namespace bsq
