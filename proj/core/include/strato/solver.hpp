#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strato/field.hpp"
#include "strato/littlewood_paley.hpp"

namespace strato::solver {

struct SimParams {
  double mu = 0.0;
  double kappa = 1.0;
  double dt = 1e-2;
  double horizon = 1.0;
  double cfl_cap = 0.4;
  bool dealias = true;
  /// Test hook: advection switched off (v = 0), buoyancy and diffusion kept.
  bool freeze_velocity = false;
  /// Exponent of the running integral of |grad rho|_{L^p}.
  double grad_rho_p = 2.0;

  void validate() const;
};

struct SimState {
  ScalarField omega;
  ScalarField rho;
  double t = 0.0;
};

/// Thrown on non-finite fields; carries the last finite state.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SimState snapshot)
      : std::runtime_error(what), snapshot_(std::move(snapshot)) {}
  const SimState& snapshot() const { return snapshot_; }

 private:
  SimState snapshot_;
};

/// Velocity spectra at the four Runge-Kutta stages of one step (times t,
/// t + h/2, t + h/2, t + h), for passive quantities carried by the same flow.
struct StepRecord {
  double t;
  double h;
  std::array<std::array<Spectrum, 2>, 4> velocity;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Largest stable step for the state under the CFL cap (infinite for v = 0).
double cfl_limit(const SimState& state, const SimParams& params);

/// One integrating-factor RK4 step of exactly length h.
SimState advance(const SimState& state, const SimParams& params, double h, const StepObserver& observer = {});

/// One step of params.dt, halved until the CFL cap holds.
SimState step(const SimState& state, const SimParams& params, const StepObserver& observer = {});

struct DiagnosticsRow {
  double t;
  double omega_l2;
  double omega_linf;
  double rho_l1;
  double rho_l2;
  double rho_linf;
  double grad_v_linf;
  double v_integral;         // V(t) = int_0^t |grad v|_inf
  double grad_rho_integral;  // int_0^t |grad rho|_{L^p}
  double circulation;
  double energy;             // |v|_{L^2}
  std::size_t steps;
};

struct Diagnostics {
  std::vector<DiagnosticsRow> rows;
  double rho_linf_initial = 0.0;
  double max_principle_excess = 0.0;  // max_t |rho(t)|_inf / |rho0|_inf - 1
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ScalarField> omega;
  std::vector<ScalarField> rho;
  Diagnostics diagnostics;
  std::size_t steps = 0;
  std::vector<double> dt_history;

  SimState state(std::size_t k) const { return {omega.at(k), rho.at(k), times.at(k)}; }
};

/// Integrates to each sample time (landing on it exactly) and records the
/// fields there. Sample times must be nondecreasing, within [t0, horizon].
Trajectory run(const SimState& init, const SimParams& params, const std::vector<double>& sample_times,
               const StepObserver& observer = {});

/// Gamma = (1 - mu) omega - L rho.
ScalarField gamma_field(const SimState& state, double mu);

/// H = L(v . grad rho) - v . grad(L rho) with dealiased products.
ScalarField commutator_H(const SimState& state);

struct CommutatorMonitor {
  double holder_norm;  // |H|_{C^eps}
  double bound_shape;  // |v|_2 |rho|_2 + (|omega|_2 + |omega|_inf) |rho|_p
  double ratio;
};

CommutatorMonitor commutator_monitor(const SimState& state, const lp::DyadicPartition& partition, double epsilon = 0.5,
                                     double p = 8.0);

struct GammaResidual {
  double residual;     // L^2 norm of the discrete Gamma equation
  double scale;        // |H|_2 + |v . grad Gamma|_2 + mu |Laplacian Gamma|_2
  double relative;
};

/// Central-difference residual of d_t Gamma + v . grad Gamma - mu Laplacian Gamma = H
/// at the middle of three consecutive equally spaced states. Throws
/// std::invalid_argument unless exactly three states with equal spacing are given.
GammaResidual gamma_residual(const std::vector<SimState>& states, double mu);

/// Field with a single Taylor-Green mode, sin(k x1) sin(k x2) with k = mode pi/L.
ScalarField taylor_green(const GridSpec& grid, int mode = 1, double amplitude = 1.0);

}  // namespace strato::solver
