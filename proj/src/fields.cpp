#include "bsq/fields.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <stdexcept>

#include "bsq/fft.hpp"
#include "bsq/kernels.hpp"

namespace bsq {

GridPtr make_grid(int nr, int nz, double R, double Lz) {
  if (nr < 4) throw std::invalid_argument("make_grid: nr must be >= 4, got " + std::to_string(nr));
  if (nz < 4 || (nz & (nz - 1)) != 0)
    throw std::invalid_argument("make_grid: nz must be a power of 2 and >= 4, got " + std::to_string(nz));
  if (!(R > 0.0) || !(Lz > 0.0)) throw std::invalid_argument("make_grid: extents must be positive");
  auto g = std::make_shared<MeridianGrid>();
  g->nr = nr;
  g->nz = nz;
  g->R = R;
  g->Lz = Lz;
  g->dr = R / nr;
  g->dz = Lz / nz;
  g->r.resize(nr);
  g->weight.resize(nr);
  for (int i = 0; i < nr; ++i) {
    g->r[i] = (i + 0.5) * g->dr;
    g->weight[i] = 2.0 * std::numbers::pi * g->r[i] * g->dr * g->dz;
  }
  g->z.resize(nz);
  for (int j = 0; j < nz; ++j) g->z[j] = j * g->dz;
  return g;
}

const char* to_string(Parity p) { return p == Parity::Even ? "Even" : "Odd"; }

ScalarField2D sample(GridPtr g, Parity p, const std::function<double(double, double)>& f) {
  ScalarField2D out(g, p);
  for (int i = 0; i < g->nr; ++i)
    for (int j = 0; j < g->nz; ++j) out(i, j) = f(g->r[i], g->z[j]);
  return out;
}

bool all_finite(const ScalarField2D& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

void require_finite(const ScalarField2D& f, const char* what) {
  if (!all_finite(f)) throw std::domain_error(std::string(what) + ": non-finite value");
}

void require_same_grid(const ScalarField2D& a, const ScalarField2D& b) {
  if (!a.grid || !b.grid || !a.grid->same_as(*b.grid)) throw std::invalid_argument("grid mismatch");
}

ScalarField2D axpy(double a, const ScalarField2D& x, const ScalarField2D& y) {
  require_same_grid(x, y);
  ScalarField2D out(y.grid, y.parity);
  for (size_t k = 0; k < out.v.size(); ++k) out.v[k] = a * x.v[k] + y.v[k];
  return out;
}

ScalarField2D scaled(double a, const ScalarField2D& x) {
  ScalarField2D out(x.grid, x.parity);
  for (size_t k = 0; k < out.v.size(); ++k) out.v[k] = a * x.v[k];
  return out;
}

ScalarField2D product(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a, b);
  ScalarField2D out(a.grid, a.parity == b.parity ? Parity::Even : Parity::Odd);
  for (size_t k = 0; k < out.v.size(); ++k) out.v[k] = a.v[k] * b.v[k];
  return out;
}

ScalarField2D divide_by_r(const ScalarField2D& f) {
  ScalarField2D out(f.grid, flip(f.parity));
  const int nz = f.nz();
  for (int i = 0; i < f.nr(); ++i) {
    const double ir = 1.0 / f.grid->r[i];
    for (int j = 0; j < nz; ++j) out(i, j) = f(i, j) * ir;
  }
  return out;
}

ScalarField2D times_r(const ScalarField2D& f) {
  ScalarField2D out(f.grid, flip(f.parity));
  const int nz = f.nz();
  for (int i = 0; i < f.nr(); ++i)
    for (int j = 0; j < nz; ++j) out(i, j) = f(i, j) * f.grid->r[i];
  return out;
}

double lp_norm(const ScalarField2D& f, double p) {
  if (std::isinf(p)) return max_abs(f);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  std::vector<double> a(f.v.size());
  if (p == 2.0)
    for (size_t k = 0; k < a.size(); ++k) a[k] = f.v[k] * f.v[k];
  else
    for (size_t k = 0; k < a.size(); ++k) a[k] = std::pow(std::abs(f.v[k]), p);
  const double s = weighted_row_sum(a.data(), f.grid->weight.data(), f.nr(), f.nz(), default_exec());
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double inner(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a, b);
  std::vector<double> w(a.v.size());
  for (size_t k = 0; k < w.size(); ++k) w[k] = a.v[k] * b.v[k];
  return weighted_row_sum(w.data(), a.grid->weight.data(), a.nr(), a.nz(), default_exec());
}

double max_abs(const ScalarField2D& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double z_wavenumber(const MeridianGrid& g, int m) { return 2.0 * std::numbers::pi * m / g.Lz; }

ScalarField2D d_r(const ScalarField2D& f) {
  const auto& g = *f.grid;
  const int nr = g.nr, nz = g.nz;
  ScalarField2D out(f.grid, flip(f.parity));
  const double s = parity_sign(f.parity);
  const double c = 0.5 / g.dr;
  for (int j = 0; j < nz; ++j) out(0, j) = (f(1, j) - s * f(0, j)) * c;
  for (int i = 1; i < nr - 1; ++i)
    for (int j = 0; j < nz; ++j) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * c;
  for (int j = 0; j < nz; ++j)
    out(nr - 1, j) = (3.0 * f(nr - 1, j) - 4.0 * f(nr - 2, j) + f(nr - 3, j)) * c;
  return out;
}

namespace {

template <class Mult>
ScalarField2D z_multiplier(const ScalarField2D& f, Parity out_parity, Mult mult) {
  const auto& g = *f.grid;
  const int nh = g.nz / 2 + 1;
  std::vector<fft::cplx> c(static_cast<size_t>(g.nr) * nh);
  fft::rows_r2c(f.v.data(), c.data(), g.nr, g.nz);
  std::vector<fft::cplx> m(nh);
  for (int k = 0; k < nh; ++k) m[k] = mult(k) / static_cast<double>(g.nz);
  for (int i = 0; i < g.nr; ++i)
    for (int k = 0; k < nh; ++k) c[static_cast<size_t>(i) * nh + k] *= m[k];
  ScalarField2D out(f.grid, out_parity);
  fft::rows_c2r(c.data(), out.v.data(), g.nr, g.nz);
  return out;
}

}  // namespace

ScalarField2D d_z(const ScalarField2D& f) {
  const auto& g = *f.grid;
  return z_multiplier(f, f.parity, [&](int k) {
    if (2 * k == g.nz) return fft::cplx(0.0, 0.0);
    return fft::cplx(0.0, z_wavenumber(g, k));
  });
}

ScalarField2D d_zz(const ScalarField2D& f) {
  const auto& g = *f.grid;
  return z_multiplier(f, f.parity, [&](int k) {
    const double kz = z_wavenumber(g, k);
    return fft::cplx(-kz * kz, 0.0);
  });
}

ScalarField2D dealias_z(const ScalarField2D& f) {
  const auto& g = *f.grid;
  const int kmax = g.nz / 3;
  return z_multiplier(f, f.parity, [&](int k) { return fft::cplx(k <= kmax ? 1.0 : 0.0, 0.0); });
}

ScalarField2D laplacian_h(const ScalarField2D& f, WallBC bc) {
  const auto& g = *f.grid;
  const int nr = g.nr, nz = g.nz;
  ScalarField2D out(f.grid, f.parity);
  const double idr2 = 1.0 / (g.dr * g.dr);
  const double wall = bc == WallBC::Dirichlet ? -1.0 : 1.0;
  for (int i = 0; i < nr; ++i) {
    const double rp = g.r_face(i + 1), rm = g.r_face(i), ir = 1.0 / g.r[i];
    for (int j = 0; j < nz; ++j) {
      const double fi = f(i, j);
      const double fp = (i + 1 < nr) ? f(i + 1, j) : wall * fi;
      // the axis ghost is weighted by the zero face radius
      const double fm = (i > 0) ? f(i - 1, j) : parity_sign(f.parity) * fi;
      out(i, j) = ir * (rp * (fp - fi) - rm * (fi - fm)) * idr2;
    }
  }
  return out;
}

// ---------------------------------------------------------------- snapshots

namespace {

template <class T>
void put(std::vector<unsigned char>& b, T x) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  unsigned char tmp[sizeof(T)];
  std::memcpy(tmp, &x, sizeof(T));
  b.insert(b.end(), tmp, tmp + sizeof(T));
}

template <class T>
T get(const std::vector<unsigned char>& b, size_t& pos) {
  if (pos + sizeof(T) > b.size()) throw std::invalid_argument("snapshot: truncated file");
  T x;
  std::memcpy(&x, b.data() + pos, sizeof(T));
  pos += sizeof(T);
  return x;
}

}  // namespace

std::vector<unsigned char> encode_snapshot(double t, const ScalarField2D& omega, const ScalarField2D& rho) {
  require_same_grid(omega, rho);
  const auto& g = *omega.grid;
  std::vector<unsigned char> b;
  b.reserve(40 + 16 * omega.v.size());
  for (char c : {'A', 'X', 'B', 'Q'}) b.push_back(static_cast<unsigned char>(c));
  put<std::uint32_t>(b, kSnapshotVersion);
  put<std::uint32_t>(b, static_cast<std::uint32_t>(g.nr));
  put<std::uint32_t>(b, static_cast<std::uint32_t>(g.nz));
  put<double>(b, g.R);
  put<double>(b, g.Lz);
  put<double>(b, t);
  for (double x : omega.v) put<double>(b, x);
  for (double x : rho.v) put<double>(b, x);
  return b;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& b) {
  if (b.size() < 4 || std::memcmp(b.data(), "AXBQ", 4) != 0) throw std::invalid_argument("snapshot: bad magic");
  size_t pos = 4;
  const auto ver = get<std::uint32_t>(b, pos);
  if (ver != kSnapshotVersion) throw std::invalid_argument("snapshot: unsupported version " + std::to_string(ver));
  const auto nr = get<std::uint32_t>(b, pos);
  const auto nz = get<std::uint32_t>(b, pos);
  const double R = get<double>(b, pos);
  const double Lz = get<double>(b, pos);
  Snapshot s;
  s.t = get<double>(b, pos);
  auto g = make_grid(static_cast<int>(nr), static_cast<int>(nz), R, Lz);
  s.omega = ScalarField2D(g, Parity::Odd);
  s.rho = ScalarField2D(g, Parity::Even);
  for (auto& x : s.omega.v) x = get<double>(b, pos);
  for (auto& x : s.rho.v) x = get<double>(b, pos);
  if (pos != b.size()) throw std::invalid_argument("snapshot: trailing bytes");
  return s;
}

void write_snapshot(const std::string& path, double t, const ScalarField2D& omega, const ScalarField2D& rho) {
  auto b = encode_snapshot(t, omega, rho);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot open " + path);
  os.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::invalid_argument("cannot open " + path);
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(b);
}

}  // namespace bsq
