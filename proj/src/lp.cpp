#include "bsq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

#include "bsq/kernels.hpp"
#include "json.hpp"

namespace bsq {

namespace {

using cplx = std::complex<double>;

double smooth_psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

template <class F>
std::vector<double> symbol(const BoxSpec& b, F w) {
  std::vector<double> s(b.size());
  for (int a = 0; a < b.n; ++a)
    for (int c = 0; c < b.n; ++c)
      for (int k = 0; k < b.n; ++k) s[b.idx(a, c, k)] = w(b.k(a), b.k(c), b.k(k));
  return s;
}

SpectralField3D with_symbol(const SpectralField3D& f, const std::vector<double>& s) {
  SpectralField3D out = f;
  multiply_inplace(out.coeffs.data(), s.data(), s.size(), default_exec());
  return out;
}

// sqrt(L^3 sum w |c|^2)
template <class F>
double weighted_l2(const SpectralField3D& f, F w) {
  const auto& b = f.box;
  std::vector<double> e(b.size());
  for (int a = 0; a < b.n; ++a)
    for (int c = 0; c < b.n; ++c)
      for (int k = 0; k < b.n; ++k) {
        const size_t id = b.idx(a, c, k);
        e[id] = w(b.k(a), b.k(c), b.k(k)) * std::norm(f.coeffs[id]);
      }
  return std::sqrt(std::pow(b.L, 3) * pairwise_sum(e.data(), e.size()));
}

double phys_norm(const SpectralField3D& f, double p) {
  const auto u = to_physical(f);
  return std::isinf(p) ? box_max_abs(u) : box_lp_norm(u, p);
}

}  // namespace

double DyadicBank::chi(double s) const {
  s = std::abs(s);
  if (s <= inner) return 1.0;
  if (s >= outer) return 0.0;
  const double t = (s - inner) / (outer - inner);
  const double a = smooth_psi(1.0 - t), b = smooth_psi(t);
  return a / (a + b);
}

double DyadicBank::phi(double s) const { return chi(0.5 * s) - chi(s); }

double DyadicBank::level(int j, double s) const {
  if (j < -1) throw std::invalid_argument("dyadic level must be >= -1");
  return j == -1 ? chi(s) : phi(s / std::ldexp(1.0, j));
}

std::string DyadicBank::to_json() const {
  nlohmann::json j{{"profile", "exp_smoothstep"}, {"inner", inner}, {"outer", outer}, {"jmax", jmax}};
  return j.dump(2);
}

DyadicBank DyadicBank::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("profile").get<std::string>() != "exp_smoothstep")
    throw std::invalid_argument("unknown dyadic bank profile");
  DyadicBank b;
  b.inner = j.at("inner").get<double>();
  b.outer = j.at("outer").get<double>();
  b.jmax = j.at("jmax").get<int>();
  return b;
}

DyadicBank make_bank(int jmax) {
  if (jmax < 0) throw std::invalid_argument("jmax must be >= 0");
  DyadicBank b;
  b.jmax = jmax;
  return b;
}

double partition_residual(const DyadicBank& bank, const BoxSpec& box) {
  double worst = 0.0;
  const double cover = std::ldexp(1.0, bank.jmax);
  for (int a = 0; a < box.n; ++a)
    for (int c = 0; c < box.n; ++c)
      for (int k = 0; k < box.n; ++k) {
        const double s = std::sqrt(box.k(a) * box.k(a) + box.k(c) * box.k(c) + box.k(k) * box.k(k));
        if (s > cover) continue;
        double sum = bank.chi(s);
        for (int j = 0; j <= bank.jmax; ++j) sum += bank.level(j, s);
        worst = std::max(worst, std::abs(sum - 1.0));
      }
  return worst;
}

double support_leak(const DyadicBank& bank, const BoxSpec& box) {
  double worst = 0.0;
  for (int a = 0; a < box.n; ++a)
    for (int c = 0; c < box.n; ++c)
      for (int k = 0; k < box.n; ++k) {
        const double s = std::sqrt(box.k(a) * box.k(a) + box.k(c) * box.k(c) + box.k(k) * box.k(k));
        if (s >= bank.outer) worst = std::max(worst, std::abs(bank.chi(s)));
        if (s <= bank.inner || s >= 2.0 * bank.outer) worst = std::max(worst, std::abs(bank.phi(s)));
      }
  return worst;
}

SpectralField3D dyadic_block(const SpectralField3D& f, int j, Direction d, const DyadicBank& bank) {
  if (j < -1) throw std::invalid_argument("dyadic_block: j must be >= -1");
  auto s = symbol(f.box, [&](double k1, double k2, double k3) {
    switch (d) {
      case Direction::Full: return bank.level(j, std::sqrt(k1 * k1 + k2 * k2 + k3 * k3));
      case Direction::Horizontal: return bank.level(j, std::hypot(k1, k2));
      case Direction::Vertical: return bank.level(j, std::abs(k3));
    }
    return 0.0;
  });
  return with_symbol(f, s);
}

SpectralField3D low_frequency_cutoff(const SpectralField3D& f, int q, const DyadicBank& bank) {
  auto s = symbol(f.box, [&](double k1, double k2, double k3) {
    return bank.low_pass(q, std::sqrt(k1 * k1 + k2 * k2 + k3 * k3));
  });
  return with_symbol(f, s);
}

double besov_tail(const SpectralField3D& f, const DyadicBank& bank) {
  const double total = coeff_l2(f);
  if (total == 0.0) return 0.0;
  const double tail = weighted_l2(f, [&](double k1, double k2, double k3) {
    const double m = 1.0 - bank.low_pass(bank.jmax + 1, std::sqrt(k1 * k1 + k2 * k2 + k3 * k3));
    return m * m;
  });
  return tail / total;
}

double besov_norm(const SpectralField3D& f, const BesovIndex& idx, bool anisotropic, const DyadicBank& bank) {
  const double tail = besov_tail(f, bank);
  if (tail > 1e-12)
    std::cerr << "warning: besov_norm spectrum extends past level " << bank.jmax << "; truncated relative L2 mass "
              << tail << "\n";
  std::vector<double> terms;
  auto accumulate = [&](double w, double norm) {
    if (std::isinf(idx.q))
      terms.push_back(w * norm);
    else
      terms.push_back(std::pow(w * norm, idx.q));
  };
  if (!anisotropic) {
    for (int j = -1; j <= bank.jmax; ++j)
      accumulate(std::pow(2.0, j * idx.s), phys_norm(dyadic_block(f, j, Direction::Full, bank), idx.p));
  } else {
    for (int j = -1; j <= bank.jmax; ++j) {
      const auto hj = dyadic_block(f, j, Direction::Horizontal, bank);
      for (int k = -1; k <= bank.jmax; ++k)
        accumulate(std::pow(2.0, j * idx.s + k * idx.t), phys_norm(dyadic_block(hj, k, Direction::Vertical, bank), idx.p));
    }
  }
  if (std::isinf(idx.q)) return terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
  return std::pow(pairwise_sum(terms.data(), terms.size()), 1.0 / idx.q);
}

double sobolev_norm(const SpectralField3D& f, double s, double t) {
  return weighted_l2(f, [&](double k1, double k2, double k3) {
    return std::pow(1.0 + k1 * k1 + k2 * k2, s) * std::pow(1.0 + k3 * k3, t);
  });
}

double sobolev_norm_iso(const SpectralField3D& f, double s) {
  return weighted_l2(f, [&](double k1, double k2, double k3) { return std::pow(1.0 + k1 * k1 + k2 * k2 + k3 * k3, s); });
}

double lambda_equivalent(const SpectralField3D& f, double s, double t) {
  auto lh = [s](double k1, double k2) { return std::pow(k1 * k1 + k2 * k2, s); };
  auto lv = [t](double k3) { return std::pow(k3 * k3, t); };
  return coeff_l2(f) + weighted_l2(f, [&](double a, double b, double) { return lh(a, b); }) +
         weighted_l2(f, [&](double, double, double c) { return lv(c); }) +
         weighted_l2(f, [&](double a, double b, double c) { return lh(a, b) * lv(c); });
}

double mixed_norm(const SpectralField3D& f, double s, double t) {
  const auto& b = f.box;
  const int n = b.n;
  const double h = b.h();
  // N(x3)^2 = L^2 sum_{kh} (1 + |xi_h|^2)^s |c(kh, x3)|^2 with c(kh, x3) the partial synthesis in x3
  std::vector<double> N(n);
  for (int c3 = 0; c3 < n; ++c3) {
    const double x3 = c3 * h;  // offset from the first node
    std::vector<double> e(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) acc += f.coeffs[b.idx(a, c, k)] * std::polar(1.0, b.k(k) * x3);
        e[static_cast<size_t>(a) * n + c] = std::pow(1.0 + b.k(a) * b.k(a) + b.k(c) * b.k(c), s) * std::norm(acc);
      }
    N[c3] = std::sqrt(b.L * b.L * pairwise_sum(e.data(), e.size()));
  }
  // H^t norm of N on the periodic interval
  std::vector<double> e(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int c3 = 0; c3 < n; ++c3) acc += N[c3] * std::polar(1.0, -b.k(k) * c3 * h);
    acc /= static_cast<double>(n);
    e[k] = std::pow(1.0 + b.k(k) * b.k(k), t) * std::norm(acc);
  }
  return std::sqrt(b.L * pairwise_sum(e.data(), e.size()));
}

SpectralField3D random_field(const BoxSpec& box, std::uint64_t seed, int n_gen, double sigma) {
  if (n_gen < 4 || n_gen > box.n) throw std::invalid_argument("random_field: need 4 <= n_gen <= box.n");
  const int M = n_gen / 2 - 1;  // modes -M..M on each axis
  const int w = 2 * M + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  std::vector<cplx> z(static_cast<size_t>(w) * w * w);
  for (auto& v : z) {
    const double re = N01(rng);
    v = cplx(re, N01(rng));
  }
  auto zid = [&](int m1, int m2, int m3) { return (static_cast<size_t>(m1 + M) * w + (m2 + M)) * w + (m3 + M); };
  auto pos = [&](int m) { return (m + box.n) % box.n; };
  SpectralField3D f(box);
  for (int m1 = -M; m1 <= M; ++m1)
    for (int m2 = -M; m2 <= M; ++m2)
      for (int m3 = -M; m3 <= M; ++m3) {
        if (m1 == 0 && m2 == 0 && m3 == 0) continue;
        const double env = std::exp(-(m1 * m1 + m2 * m2 + m3 * m3) / (2.0 * sigma * sigma));
        const cplx c = 0.5 * (z[zid(m1, m2, m3)] + std::conj(z[zid(-m1, -m2, -m3)])) * env;
        f.coeffs[box.idx(pos(m1), pos(m2), pos(m3))] = c;
      }
  return f;
}

SpectralField3D random_band_field(const BoxSpec& box, int j, std::uint64_t seed, const DyadicBank& bank) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01(0.0, 1.0);
  std::vector<cplx> z(box.size());
  for (auto& v : z) {
    const double re = N01(rng);
    v = cplx(re, N01(rng));
  }
  const int n = box.n;
  auto neg = [n](int m) { return (n - m) % n; };
  SpectralField3D f(box);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) {
        // Nyquist planes are dropped so every mode has a distinct partner
        if (2 * a == n || 2 * c == n || 2 * k == n) continue;
        f.coeffs[box.idx(a, c, k)] = 0.5 * (z[box.idx(a, c, k)] + std::conj(z[box.idx(neg(a), neg(c), neg(k))]));
      }
  f.coeffs[0] = 0.0;
  return dyadic_block(f, j, Direction::Full, bank);
}

BernsteinReport check_bernstein(const std::vector<int>& levels, const std::vector<std::pair<double, double>>& pairs,
                                int samples, std::uint64_t seed, const BoxSpec& box, const DyadicBank& bank,
                                double cstar) {
  BernsteinReport rep;
  rep.cstar = cstar;
  const double lim = std::log2(cstar);
  auto note = [&](const BernsteinRow& r, const char* what, double v, bool two_sided) {
    const double l = std::log2(v);
    const bool ok = std::isfinite(l) && l <= lim && (!two_sided || l >= -lim);
    rep.max_log2 = std::max(rep.max_log2, two_sided ? std::abs(l) : std::max(l, 0.0));
    if (!ok) {
      rep.pass = false;
      rep.failures.push_back(std::string(what) + " j=" + std::to_string(r.j) + " k=" + std::to_string(r.k) +
                             " a=" + std::to_string(r.a) + " b=" + std::to_string(r.b) + " ratio=" + std::to_string(v));
    }
  };
  for (int j : levels) {
    if (j < 0) throw std::invalid_argument("check_bernstein: levels must be >= 0");
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sd = seed + 1000003ull * static_cast<std::uint64_t>(j) + static_cast<std::uint64_t>(s);
      const auto f = random_band_field(box, j, sd, bank);
      std::array<SpectralField3D, 3> df{derivative(f, 1), derivative(f, 2), derivative(f, 3)};
      for (const auto& [a, b] : pairs) {
        if (a > b) throw std::invalid_argument("check_bernstein: need a <= b");
        const double gap = 3.0 * (1.0 / a - (std::isinf(b) ? 0.0 : 1.0 / b));
        const double fa = phys_norm(f, a);
        for (int k = (a < b ? 0 : 1); k <= 1; ++k) {
          BernsteinRow r{j, k, a, b, sd, 0.0, std::numeric_limits<double>::quiet_NaN()};
          if (k == 0) {
            r.forward = phys_norm(f, b) / (std::pow(2.0, j * gap) * fa);
          } else {
            double mb = 0.0, ma = 0.0;
            for (const auto& d : df) {
              mb = std::max(mb, phys_norm(d, b));
              ma = std::max(ma, phys_norm(d, a));
            }
            r.forward = mb / (std::pow(2.0, j * (1.0 + gap)) * fa);
            r.reverse = std::ldexp(fa, j) / ma;
            note(r, "reverse", r.reverse, false);
          }
          note(r, "forward", r.forward, a == b);
          rep.rows.push_back(r);
        }
      }
    }
  }
  return rep;
}

HeatDecayReport check_heat_decay(const SpectralField3D& f, int j, const std::vector<double>& t_grid, double p,
                                 const DyadicBank& bank) {
  if (j < 0) throw std::invalid_argument("check_heat_decay: j = -1 (low-pass block) is excluded");
  if (t_grid.size() < 2) throw std::invalid_argument("check_heat_decay: need at least two times");
  const auto blk = dyadic_block(f, j, Direction::Full, bank);
  std::vector<double> y;
  for (double t : t_grid) {
    auto s = symbol(f.box, [t](double k1, double k2, double k3) { return std::exp(-t * (k1 * k1 + k2 * k2 + k3 * k3)); });
    y.push_back(std::log(phys_norm(with_symbol(blk, s), p)));
  }
  double tm = 0, ym = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    tm += t_grid[i];
    ym += y[i];
  }
  tm /= y.size();
  ym /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    num += (t_grid[i] - tm) * (y[i] - ym);
    den += (t_grid[i] - tm) * (t_grid[i] - tm);
  }
  HeatDecayReport r;
  r.rate = -num / den;
  const double four_j = std::ldexp(1.0, 2 * j);
  r.lo = four_j * 9.0 / 16.0;
  r.hi = four_j * 64.0 / 9.0;
  r.pass = std::isfinite(r.rate) && r.rate >= r.lo && r.rate <= r.hi;
  return r;
}

double special_norm(const RealField3D& f, SpecialNorm kind, int p_max, const DyadicBank& bank) {
  if (p_max < 2) throw std::invalid_argument("special_norm: p_max must be >= 2");
  double best = 0.0;
  if (kind == SpecialNorm::LogLip) {
    const auto s = to_spectral(f);
    for (int q = 2; q <= bank.jmax; ++q) {
      const auto sq = low_frequency_cutoff(s, q, bank);
      const auto g1 = to_physical(derivative(sq, 1)), g2 = to_physical(derivative(sq, 2)),
                 g3 = to_physical(derivative(sq, 3));
      double m = 0.0;
      for (size_t i = 0; i < g1.v.size(); ++i)
        m = std::max(m, std::sqrt(g1.v[i] * g1.v[i] + g2.v[i] * g2.v[i] + g3.v[i] * g3.v[i]));
      best = std::max(best, m / (q + 1));
    }
    return best;
  }
  for (int p = 2; p <= p_max; ++p) {
    const double w = kind == SpecialNorm::L ? 1.0 / p : 1.0 / std::sqrt(static_cast<double>(p));
    best = std::max(best, w * box_lp_norm(f, p));
  }
  return best;
}

QuasiOrthoReport check_quasi_orthogonality(const BoxSpec& box, std::uint64_t seed, const DyadicBank& bank) {
  QuasiOrthoReport rep;
  const int n_gen = box.n / 2;
  const auto f = random_field(box, seed, n_gen, n_gen / 8.0);
  const double fn = coeff_l2(f);
  std::vector<SpectralField3D> blocks;
  for (int j = -1; j <= bank.jmax; ++j) blocks.push_back(dyadic_block(f, j, Direction::Full, bank));
  for (int j = -1; j <= bank.jmax; ++j)
    for (int jp = -1; jp <= bank.jmax; ++jp)
      if (std::abs(j - jp) >= 2)
        rep.block_residual = std::max(rep.block_residual,
                                      coeff_l2(dyadic_block(blocks[jp + 1], j, Direction::Full, bank)) / fn);
  const auto u = random_field(box, seed + 1, n_gen, n_gen / 8.0);
  const auto v = random_field(box, seed + 2, n_gen, n_gen / 8.0);
  for (int jp : {4, 5}) {
    const auto lo = to_physical(low_frequency_cutoff(u, jp - 1, bank));
    const auto hi = to_physical(dyadic_block(v, jp, Direction::Full, bank));
    const auto P = to_spectral(pointwise(lo, hi));
    const double pn = coeff_l2(P);
    for (int j = -1; j <= bank.jmax; ++j) {
      if (std::abs(j - jp) < 5) continue;
      rep.paraproduct_residual = std::max(rep.paraproduct_residual,
                                          coeff_l2(dyadic_block(P, j, Direction::Full, bank)) / pn);
    }
  }
  return rep;
}

const char* to_string(LpInequality w) {
  switch (w) {
    case LpInequality::Trilinear: return "trilinear_l6";
    case LpInequality::TrilinearAniso: return "trilinear_aniso";
    case LpInequality::Sharp: return "sharp_linf";
    case LpInequality::LinfHalpha: return "linf_halpha";
    case LpInequality::Interp: return "interpolation";
    case LpInequality::Algebra: return "algebra";
  }
  return "?";
}

std::pair<double, double> inequality_sides(LpInequality which, const SpectralField3D& f, const SpectralField3D& g,
                                           const SpectralField3D& h, const InequalityParams& prm) {
  if (which == LpInequality::LinfHalpha && !(prm.alpha > 0.5 && prm.alpha <= 1.0))
    throw std::invalid_argument("inequality_harness: alpha must lie in (1/2, 1]");
  const BoxSpec& box = f.box;
  auto d3 = [](double, double, double k3) { return k3 * k3; };
  auto dh = [](double k1, double k2, double) { return k1 * k1 + k2 * k2; };
  double L = 0, R = 0;
  switch (which) {
    case LpInequality::Trilinear:
    case LpInequality::TrilinearAniso: {
      const auto pf = to_physical(f), pg = to_physical(g), ph = to_physical(h);
      RealField3D prod(box);
      for (size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = std::abs(pf.v[i] * pg.v[i] * ph.v[i]);
      L = box_integral(prod);
      const double g2 = coeff_l2(g), gh = weighted_l2(g, dh);
      if (which == LpInequality::Trilinear)
        R = std::pow(box_lp_norm(pf, 6.0), 0.75) * std::pow(weighted_l2(f, d3), 0.25) * std::sqrt(g2 * gh) *
            coeff_l2(h);
      else
        R = std::sqrt(coeff_l2(f) * weighted_l2(f, d3) * g2 * gh * coeff_l2(h) * weighted_l2(h, dh));
      break;
    }
    case LpInequality::Sharp: {
      L = box_max_abs(to_physical(f));
      const double g1 = weighted_l2(f, [](double a, double b, double c) { return a * a + b * b + c * c; });
      const double g2 = weighted_l2(f, [](double a, double b, double c) { return (a * a + b * b) * (a * a + b * b + c * c); });
      R = std::sqrt(g1 * g2);
      break;
    }
    case LpInequality::LinfHalpha: {
      L = box_max_abs(to_physical(f));
      const double al = prm.alpha;
      const double h0 = sobolev_norm_iso(f, al);
      const double h1 = weighted_l2(f, [al](double a, double b, double c) {
        return std::pow(1.0 + a * a + b * b + c * c, al) * (a * a + b * b);
      });
      R = std::pow(h0, al - 0.5) * std::pow(h1, 1.5 - al);
      break;
    }
    case LpInequality::Interp: {
      const double th = prm.theta;
      L = sobolev_norm(f, th * prm.s1 + (1 - th) * prm.s2, th * prm.t1 + (1 - th) * prm.t2);
      R = std::pow(sobolev_norm(f, prm.s1, prm.t1), th) * std::pow(sobolev_norm(f, prm.s2, prm.t2), 1 - th);
      break;
    }
    case LpInequality::Algebra: {
      const auto uv = to_spectral(pointwise(to_physical(f), to_physical(g)));
      L = sobolev_norm(uv, prm.s, prm.t);
      R = sobolev_norm(f, prm.s, prm.t) * sobolev_norm(g, prm.s, prm.t);
      break;
    }
  }
  return {L, R};
}

HarnessResult inequality_harness(LpInequality which, int samples, std::uint64_t seed, const BoxSpec& box,
                                 const InequalityParams& prm) {
  if (which == LpInequality::LinfHalpha && !(prm.alpha > 0.5 && prm.alpha <= 1.0))
    throw std::invalid_argument("inequality_harness: alpha must lie in (1/2, 1]");
  const int n_gen = prm.n_gen > 0 ? prm.n_gen : box.n / 2;
  const double sigma = n_gen / 8.0;
  const bool three = which == LpInequality::Trilinear || which == LpInequality::TrilinearAniso;
  const bool two = three || which == LpInequality::Algebra;
  std::vector<double> lhs(samples), rhs(samples);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t base = seed + 3ull * static_cast<std::uint64_t>(s);
    const auto f = random_field(box, base, n_gen, sigma);
    const auto g = two ? random_field(box, base + 1, n_gen, sigma) : SpectralField3D(box);
    const auto h = three ? random_field(box, base + 2, n_gen, sigma) : SpectralField3D(box);
    std::tie(lhs[s], rhs[s]) = inequality_sides(which, f, g, h, prm);
  }
  HarnessResult res;
  res.lemma = to_string(which);
  for (int s = 0; s < samples; ++s) res.add(res.lemma, seed + 3ull * static_cast<std::uint64_t>(s), lhs[s], rhs[s]);
  return res;
}

RealField3D lift_to_box(const ScalarField2D& f, int n) {
  const auto& g = *f.grid;
  const auto box = make_box(n, std::max(2.0 * g.R, g.Lz));
  const double sgn = parity_sign(f.parity);
  auto at = [&](int i, int j) {
    j = ((j % g.nz) + g.nz) % g.nz;
    if (i < 0) return sgn * f(-i - 1, j);
    if (i >= g.nr) return 0.0;
    return f(i, j);
  };
  return sample_box(box, [&](double x1, double x2, double x3) {
    const double r = std::hypot(x1, x2);
    if (r >= g.R) return 0.0;
    const double z = x3 + 0.5 * g.Lz;
    const double sr = r / g.dr - 0.5, sz = z / g.dz;
    const int i = static_cast<int>(std::floor(sr)), j = static_cast<int>(std::floor(sz));
    const double tr = sr - i, tz = sz - j;
    return (1 - tr) * ((1 - tz) * at(i, j) + tz * at(i, j + 1)) + tr * ((1 - tz) * at(i + 1, j) + tz * at(i + 1, j + 1));
  });
}

}  // namespace bsq
