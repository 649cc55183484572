#include "bsq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace bsq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key, "config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(key, "config key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "config key '" + key + "': expected true/false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& v)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> s = {
      {"grid.nr", [](RunConfig& c, auto& k, auto& v) { c.grid.nr = to_int(k, v); }},
      {"grid.nz", [](RunConfig& c, auto& k, auto& v) { c.grid.nz = to_int(k, v); }},
      {"grid.R", [](RunConfig& c, auto& k, auto& v) { c.grid.R = to_double(k, v); }},
      {"grid.Lz", [](RunConfig& c, auto& k, auto& v) { c.grid.Lz = to_double(k, v); }},
      {"time.dt", [](RunConfig& c, auto& k, auto& v) { c.time.dt = to_double(k, v); }},
      {"time.t_end", [](RunConfig& c, auto& k, auto& v) { c.time.t_end = to_double(k, v); }},
      {"time.scheme",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "cnab2")
           c.time.scheme = Scheme::CNAB2;
         else if (v == "rk3imex")
           c.time.scheme = Scheme::RK3IMEX;
         else
           throw ConfigError(k, "config key '" + k + "': scheme must be cnab2 or rk3imex, got '" + v + "'");
       }},
      {"time.dealias", [](RunConfig& c, auto& k, auto& v) { c.time.dealias = to_bool(k, v); }},
      {"init.kind",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "zero")
           c.init.kind = InitKind::Zero;
         else if (v == "density_bubble")
           c.init.kind = InitKind::DensityBubble;
         else if (v == "vortex_ring")
           c.init.kind = InitKind::VortexRing;
         else if (v == "combined")
           c.init.kind = InitKind::Combined;
         else
           throw ConfigError(k, "config key '" + k + "': unknown init kind '" + v + "'");
       }},
      {"init.r0", [](RunConfig& c, auto& k, auto& v) { c.init.r0 = to_double(k, v); }},
      {"init.z0", [](RunConfig& c, auto& k, auto& v) { c.init.z0 = to_double(k, v); }},
      {"init.sigma", [](RunConfig& c, auto& k, auto& v) { c.init.sigma = to_double(k, v); }},
      {"init.amplitude", [](RunConfig& c, auto& k, auto& v) { c.init.amplitude = to_double(k, v); }},
      {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output.dir = v; }},
      {"output.snapshot_every", [](RunConfig& c, auto& k, auto& v) { c.output.snapshot_every = to_int(k, v); }},
      {"output.observe_every", [](RunConfig& c, auto& k, auto& v) { c.output.observe_every = to_int(k, v); }},
      {"verify.energy_tol", [](RunConfig& c, auto& k, auto& v) { c.verify.energy_tol = to_double(k, v); }},
      {"verify.density_l2_tol", [](RunConfig& c, auto& k, auto& v) { c.verify.density_l2_tol = to_double(k, v); }},
      {"verify.density_linf_tol",
       [](RunConfig& c, auto& k, auto& v) { c.verify.density_linf_tol = to_double(k, v); }},
      {"verify.omega_over_r_tol",
       [](RunConfig& c, auto& k, auto& v) { c.verify.omega_over_r_tol = to_double(k, v); }},
      {"verify.gamma_tol", [](RunConfig& c, auto& k, auto& v) { c.verify.gamma_tol = to_double(k, v); }},
      {"verify.checks",
       [](RunConfig& c, auto& k, auto& v) {
         static const std::vector<std::string> known{"energy", "density", "omega_over_r", "gamma"};
         c.verify.checks.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (item.empty()) continue;
           if (std::find(known.begin(), known.end(), item) == known.end())
             throw ConfigError(k, "config key '" + k + "': unknown check '" + item + "'");
           c.verify.checks.push_back(item);
         }
       }},
  };
  return s;
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& k, const std::string& why) { throw ConfigError(k, "config key '" + k + "': " + why); };
  auto pow2 = [](int n) { return n >= 4 && (n & (n - 1)) == 0; };
  if (!pow2(c.grid.nr)) bad("grid.nr", "must be a power of 2 and >= 4");
  if (!pow2(c.grid.nz)) bad("grid.nz", "must be a power of 2 and >= 4");
  if (!(c.grid.R > 0)) bad("grid.R", "must be positive");
  if (!(c.grid.Lz > 0)) bad("grid.Lz", "must be positive");
  if (!(c.time.dt > 0)) bad("time.dt", "must be positive");
  if (c.time.t_end < 0) bad("time.t_end", "must be >= 0");
  if (!(c.init.sigma > 0)) bad("init.sigma", "must be positive");
  if (c.init.r0 < 0) bad("init.r0", "must be >= 0");
  if (c.output.observe_every < 1) bad("output.observe_every", "must be >= 1");
  if (c.output.snapshot_every < 0) bad("output.snapshot_every", "must be >= 0");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "config line " + std::to_string(lineno) + ": expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto& s = setters();
    const auto it = std::find_if(s.begin(), s.end(), [&](const auto& p) { return p.first == key; });
    if (it == s.end()) throw ConfigError(key, "unknown config key '" + key + "'");
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError(key, "config key '" + key + "' given twice");
    seen.push_back(key);
    it->second(c, key, value);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  const char* kinds[] = {"zero", "density_bubble", "vortex_ring", "combined"};
  o << "grid.nr = " << c.grid.nr << "\ngrid.nz = " << c.grid.nz << "\ngrid.R = " << c.grid.R
    << "\ngrid.Lz = " << c.grid.Lz << "\ntime.dt = " << c.time.dt << "\ntime.t_end = " << c.time.t_end
    << "\ntime.scheme = " << (c.time.scheme == Scheme::CNAB2 ? "cnab2" : "rk3imex")
    << "\ntime.dealias = " << (c.time.dealias ? "true" : "false")
    << "\ninit.kind = " << kinds[static_cast<int>(c.init.kind)] << "\ninit.r0 = " << c.init.r0
    << "\ninit.z0 = " << c.init.z0 << "\ninit.sigma = " << c.init.sigma << "\ninit.amplitude = " << c.init.amplitude
    << "\noutput.dir = " << c.output.dir << "\noutput.snapshot_every = " << c.output.snapshot_every
    << "\noutput.observe_every = " << c.output.observe_every << "\nverify.energy_tol = " << c.verify.energy_tol
    << "\nverify.density_l2_tol = " << c.verify.density_l2_tol
    << "\nverify.density_linf_tol = " << c.verify.density_linf_tol
    << "\nverify.omega_over_r_tol = " << c.verify.omega_over_r_tol << "\nverify.gamma_tol = " << c.verify.gamma_tol
    << "\nverify.checks = ";
  for (size_t i = 0; i < c.verify.checks.size(); ++i) o << (i ? "," : "") << c.verify.checks[i];
  o << "\n";
  return o.str();
}

SimState initial_state(const RunConfig& c) {
  const auto g = make_grid(c.grid.nr, c.grid.nz, c.grid.R, c.grid.Lz);
  const double z0 = c.init.z0 < 0 ? 0.5 * c.grid.Lz : c.init.z0;
  const double s2 = c.init.sigma * c.init.sigma, A = c.init.amplitude, r0 = c.init.r0;
  const bool dens = c.init.kind == InitKind::DensityBubble || c.init.kind == InitKind::Combined;
  const bool ring = c.init.kind == InitKind::VortexRing || c.init.kind == InitKind::Combined;
  auto rho = sample(g, Parity::Even, [&](double r, double z) {
    return dens ? A * std::exp(-(r * r + (z - z0) * (z - z0)) / s2) : 0.0;
  });
  auto omega = sample(g, Parity::Odd, [&](double r, double z) {
    return ring ? A * r * std::exp(-((r - r0) * (r - r0) + (z - z0) * (z - z0)) / s2) : 0.0;
  });
  return make_state(0.0, std::move(omega), std::move(rho));
}

}  // namespace bsq
