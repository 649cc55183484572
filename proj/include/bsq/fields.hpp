#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bsq {

struct MeridianGrid {
  int nr = 0, nz = 0;
  double R = 0.0, Lz = 0.0;
  double dr = 0.0, dz = 0.0;
  std::vector<double> r;       // cell centres (i + 1/2) dr
  std::vector<double> z;       // j dz
  std::vector<double> weight;  // 2 pi r_i dr dz
  double r_face(int i) const { return i * dr; }  // face i-1/2
  bool same_as(const MeridianGrid& o) const {
    return nr == o.nr && nz == o.nz && R == o.R && Lz == o.Lz;
  }
};

using GridPtr = std::shared_ptr<const MeridianGrid>;

GridPtr make_grid(int nr, int nz, double R, double Lz);

enum class Parity { Even, Odd };
inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
inline double parity_sign(Parity p) { return p == Parity::Even ? 1.0 : -1.0; }
const char* to_string(Parity p);

// Value at the wall face r=R: Dirichlet (zero value) or Neumann (zero slope).
enum class WallBC { Dirichlet, Neumann };

struct ScalarField2D {
  GridPtr grid;
  std::vector<double> v;  // v[i*nz + j]
  Parity parity = Parity::Even;

  ScalarField2D() = default;
  ScalarField2D(GridPtr g, Parity p) : grid(std::move(g)), v(grid->nr * grid->nz, 0.0), parity(p) {}
  double& operator()(int i, int j) { return v[static_cast<size_t>(i) * grid->nz + j]; }
  double operator()(int i, int j) const { return v[static_cast<size_t>(i) * grid->nz + j]; }
  int nr() const { return grid->nr; }
  int nz() const { return grid->nz; }
};

struct VelocityField2D {
  ScalarField2D ur;  // Odd
  ScalarField2D uz;  // Even
};

ScalarField2D sample(GridPtr g, Parity p, const std::function<double(double, double)>& f);
bool all_finite(const ScalarField2D& f);
void require_finite(const ScalarField2D& f, const char* what);
void require_same_grid(const ScalarField2D& a, const ScalarField2D& b);

// pointwise algebra returning fresh fields
ScalarField2D axpy(double a, const ScalarField2D& x, const ScalarField2D& y);  // a x + y
ScalarField2D scaled(double a, const ScalarField2D& x);
ScalarField2D product(const ScalarField2D& a, const ScalarField2D& b);  // parity multiplies
ScalarField2D divide_by_r(const ScalarField2D& f);                      // parity flips
ScalarField2D times_r(const ScalarField2D& f);

double lp_norm(const ScalarField2D& f, double p);  // p = INFINITY for max
double inner(const ScalarField2D& a, const ScalarField2D& b);
double max_abs(const ScalarField2D& f);

ScalarField2D d_r(const ScalarField2D& f);
ScalarField2D d_z(const ScalarField2D& f);
ScalarField2D d_zz(const ScalarField2D& f);
ScalarField2D laplacian_h(const ScalarField2D& f, WallBC bc = WallBC::Dirichlet);
// 2/3-rule truncation in z (modes |m| > nz/3 zeroed)
ScalarField2D dealias_z(const ScalarField2D& f);

// z wavenumber for FFT index m in [0, nz/2]
double z_wavenumber(const MeridianGrid& g, int m);

// Snapshot I/O: "AXBQ", u32 version, u32 nr, u32 nz, f64 R, Lz, t, omega, rho.
struct Snapshot {
  double t = 0.0;
  ScalarField2D omega, rho;
};
constexpr std::uint32_t kSnapshotVersion = 1;
void write_snapshot(const std::string& path, double t, const ScalarField2D& omega,
                    const ScalarField2D& rho);
std::vector<unsigned char> encode_snapshot(double t, const ScalarField2D& omega,
                                           const ScalarField2D& rho);
Snapshot read_snapshot(const std::string& path);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

}  // namespace bsq
