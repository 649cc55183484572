#pragma once
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bsq/diagnostics.hpp"
#include "bsq/fields.hpp"
#include "bsq/kernels.hpp"
#include "bsq/poisson.hpp"

namespace bsq {

enum class Scheme { CNAB2, RK3IMEX };

using ForcingFn = std::function<ScalarField2D(double t)>;

struct StepConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::CNAB2;
  bool dealias = true;
  ForcingFn forcing_omega, forcing_rho;
  bool transport = true;  // advection, buoyancy and stretching; off = diffusion + forcing only
  double cfl_max = 0.5;
};

struct CflError : std::runtime_error {
  double cfl;
  CflError(double c, const std::string& what) : std::runtime_error(what), cfl(c) {}
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// factorizations reused across steps
struct StepCache {
  StreamSolveWorkspace stream;
  std::map<std::pair<int, double>, TriFactor> implicit;  // (field, coefficient) -> factor
};

struct SimState {
  double t = 0.0;
  long step = 0;
  ScalarField2D omega_theta;  // Odd
  ScalarField2D rho;          // Even
  ScalarField2D psi;          // Even
  VelocityField2D velocity;
  std::optional<std::pair<ScalarField2D, ScalarField2D>> prev_explicit;
  double prev_dt = 0.0;
  std::shared_ptr<StepCache> cache;
};

SimState make_state(double t, ScalarField2D omega_theta, ScalarField2D rho);
void refresh_velocity(SimState& s);
double cfl_number(const VelocityField2D& u, double dt);

// skew-symmetric advection 1/2[u.grad f + div(u f)] on the meridian grid
ScalarField2D advection(const VelocityField2D& u, const ScalarField2D& f, bool dealias, Exec e = default_exec());
ScalarField2D advection_serial(const VelocityField2D& u, const ScalarField2D& f, bool dealias);

// (T_omega, T_rho) at state.t, forcing included
std::pair<ScalarField2D, ScalarField2D> explicit_tendency(const SimState& s, const StepConfig& cfg);
std::pair<ScalarField2D, ScalarField2D> explicit_tendency_at(const SimState& s, const StepConfig& cfg, double t);

SimState step(const SimState& s, const StepConfig& cfg);

using Observer = std::function<void(const SimState&, const DiagnosticsRow&)>;

struct RunOptions {
  int observe_every = 1;
  std::vector<Observer> observers;
  int snapshot_every = 0;  // 0 = none
  std::string snapshot_dir;
  std::string dump_path;  // written with the last good state on failure
};

struct RunError : std::runtime_error {
  long step;
  DiagnosticsRecord record;
  std::string dump_path;
  bool cfl;
  RunError(const std::string& what, long step_, DiagnosticsRecord rec, std::string dump, bool cfl_)
      : std::runtime_error(what), step(step_), record(std::move(rec)), dump_path(std::move(dump)), cfl(cfl_) {}
};

// Steps until t >= t_end; final state returned through `final_state` when given.
DiagnosticsRecord run(const SimState& initial, const StepConfig& cfg, double t_end, const RunOptions& opt = {},
                      SimState* final_state = nullptr);

}  // namespace bsq
