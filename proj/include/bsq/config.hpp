#pragma once
// Flat "section.key = value" run configuration with strict key checking.
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsq/solver.hpp"

namespace bsq {

struct ConfigError : std::runtime_error {
  std::string key;  // offending key, empty for syntax errors
  ConfigError(std::string k, const std::string& what) : std::runtime_error(what), key(std::move(k)) {}
};

enum class InitKind { Zero, DensityBubble, VortexRing, Combined };

struct RunConfig {
  struct {
    int nr = 128, nz = 128;
    double R = 16.0, Lz = 32.0;
  } grid;
  struct {
    double dt = 0.01, t_end = 2.0;
    Scheme scheme = Scheme::CNAB2;
    bool dealias = true;
  } time;
  struct {
    InitKind kind = InitKind::DensityBubble;
    double r0 = 0.0;
    double z0 = -1.0;  // negative: Lz / 2
    double sigma = 1.0, amplitude = 1.0;
  } init;
  struct {
    std::string dir = "out";
    int snapshot_every = 0;
    int observe_every = 1;
  } output;
  struct {
    double energy_tol = 1e-3, density_l2_tol = 1e-3, density_linf_tol = 1e-2, omega_over_r_tol = 1e-2,
           gamma_tol = 1e-3;
    std::vector<std::string> checks{"energy", "density", "omega_over_r", "gamma"};
  } verify;
};

// every accepted key, in documentation order
const std::vector<std::string>& config_keys();
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string to_text(const RunConfig& c);

// initial (omega_theta, rho) for the configured preset
SimState initial_state(const RunConfig& c);

}  // namespace bsq
