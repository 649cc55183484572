#pragma once
// Thin FFTW wrappers. Plans are created once (FFTW_ESTIMATE | FFTW_UNALIGNED)
// under a mutex and executed with the new-array interface, so callers may
// pass any buffer from any thread.
#include <complex>
#include <vector>

namespace bsq::fft {

using cplx = std::complex<double>;

// rows x n real, contiguous rows -> rows x (n/2+1) complex. Unnormalized.
void rows_r2c(const double* in, cplx* out, int rows, int n);
// inverse of the above, unnormalized; `in` is not modified.
void rows_c2r(const cplx* in, double* out, int rows, int n);

// In-place 3D complex transform of an n^3 cube; sign -1 forward, +1 backward.
void cube_c2c(cplx* data, int n, int sign);

// Real n0 x n1 x n2 <-> complex n0 x n1 x (n2/2+1).
void box_r2c(const double* in, cplx* out, int n0, int n1, int n2);
void box_c2r(const cplx* in, double* out, int n0, int n1, int n2);

// In-place 3D real-to-real transform with FFTW kinds per axis
// (FFTW_REDFT00 / FFTW_RODFT00 as ints).
void box_r2r(double* data, int n0, int n1, int n2, int k0, int k1, int k2);

}  // namespace bsq::fft
