#include "bsq/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace bsq::fft {

namespace {

using Key = std::tuple<int, int, int, int, int, int, int>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::map<Key, fftw_plan>& cache() {
  static std::map<Key, fftw_plan> c;
  return c;
}

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

template <class Make>
fftw_plan get_plan(const Key& k, Make make) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache().find(k);
  if (it != cache().end()) return it->second;
  fftw_plan p = make();
  cache().emplace(k, p);
  return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void rows_r2c(const double* in, cplx* out, int rows, int n) {
  const int nh = n / 2 + 1;
  fftw_plan p = get_plan({0, rows, n, 0, 0, 0, 0}, [&] {
    double* a = fftw_alloc_real(static_cast<size_t>(rows) * n);
    fftw_complex* b = fftw_alloc_complex(static_cast<size_t>(rows) * nh);
    fftw_plan q = fftw_plan_many_dft_r2c(1, &n, rows, a, nullptr, 1, n, b, nullptr, 1, nh, kFlags);
    fftw_free(a);
    fftw_free(b);
    return q;
  });
  fftw_execute_dft_r2c(p, const_cast<double*>(in), as_fftw(out));
}

void rows_c2r(const cplx* in, double* out, int rows, int n) {
  const int nh = n / 2 + 1;
  fftw_plan p = get_plan({1, rows, n, 0, 0, 0, 0}, [&] {
    fftw_complex* a = fftw_alloc_complex(static_cast<size_t>(rows) * nh);
    double* b = fftw_alloc_real(static_cast<size_t>(rows) * n);
    fftw_plan q = fftw_plan_many_dft_c2r(1, &n, rows, a, nullptr, 1, nh, b, nullptr, 1, n, kFlags);
    fftw_free(a);
    fftw_free(b);
    return q;
  });
  // c2r destroys its input
  std::vector<cplx> tmp(in, in + static_cast<size_t>(rows) * nh);
  fftw_execute_dft_c2r(p, as_fftw(tmp.data()), out);
}

void cube_c2c(cplx* data, int n, int sign) {
  fftw_plan p = get_plan({2, n, sign, 0, 0, 0, 0}, [&] {
    const size_t N = static_cast<size_t>(n) * n * n;
    fftw_complex* a = fftw_alloc_complex(N);
    fftw_plan q = fftw_plan_dft_3d(n, n, n, a, a, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, kFlags);
    fftw_free(a);
    return q;
  });
  fftw_execute_dft(p, as_fftw(data), as_fftw(data));
}

void box_r2c(const double* in, cplx* out, int n0, int n1, int n2) {
  fftw_plan p = get_plan({3, n0, n1, n2, 0, 0, 0}, [&] {
    double* a = fftw_alloc_real(static_cast<size_t>(n0) * n1 * n2);
    fftw_complex* b = fftw_alloc_complex(static_cast<size_t>(n0) * n1 * (n2 / 2 + 1));
    fftw_plan q = fftw_plan_dft_r2c_3d(n0, n1, n2, a, b, kFlags);
    fftw_free(a);
    fftw_free(b);
    return q;
  });
  fftw_execute_dft_r2c(p, const_cast<double*>(in), as_fftw(const_cast<cplx*>(out)));
}

void box_c2r(const cplx* in, double* out, int n0, int n1, int n2) {
  fftw_plan p = get_plan({4, n0, n1, n2, 0, 0, 0}, [&] {
    fftw_complex* a = fftw_alloc_complex(static_cast<size_t>(n0) * n1 * (n2 / 2 + 1));
    double* b = fftw_alloc_real(static_cast<size_t>(n0) * n1 * n2);
    fftw_plan q = fftw_plan_dft_c2r_3d(n0, n1, n2, a, b, kFlags);
    fftw_free(a);
    fftw_free(b);
    return q;
  });
  std::vector<cplx> tmp(in, in + static_cast<size_t>(n0) * n1 * (n2 / 2 + 1));
  fftw_execute_dft_c2r(p, as_fftw(tmp.data()), out);
}

void box_r2r(double* data, int n0, int n1, int n2, int k0, int k1, int k2) {
  fftw_plan p = get_plan({5, n0, n1, n2, k0, k1, k2}, [&] {
    double* a = fftw_alloc_real(static_cast<size_t>(n0) * n1 * n2);
    fftw_plan q = fftw_plan_r2r_3d(n0, n1, n2, a, a, static_cast<fftw_r2r_kind>(k0),
                                   static_cast<fftw_r2r_kind>(k1), static_cast<fftw_r2r_kind>(k2), kFlags);
    fftw_free(a);
    return q;
  });
  fftw_execute_r2r(p, data, data);
}

}  // namespace bsq::fft
