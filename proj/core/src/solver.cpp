#include "strato/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strato/fft.hpp"
#include "strato/spectral.hpp"

namespace strato::solver {
namespace {

constexpr Complex kI{0.0, 1.0};

struct Pair {
  Spectrum w;
  Spectrum r;
};

// exp(-nu |k|^2 h) per stored mode.
std::vector<double> decay_factors(const GridSpec& grid, double nu, double h) {
  std::vector<double> out;
  out.reserve(grid.spectral_size());
  spectral::for_each_mode(grid, [&](const spectral::Mode& m) { out.push_back(std::exp(-nu * m.k_sq() * h)); });
  return out;
}

// out = fa * a + c * fb * b, with per-mode factors (null factor = 1).
Spectrum combine(const Spectrum& a, const std::vector<double>* fa, double c, const Spectrum& b,
                 const std::vector<double>* fb) {
  Spectrum out(a.grid());
  auto da = a.data();
  auto db = b.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < dst.size(); ++k) {
    const Complex x = fa ? (*fa)[k] * da[k] : da[k];
    const Complex y = fb ? (*fb)[k] * db[k] : db[k];
    dst[k] = x + c * y;
  }
  return out;
}

class Stepper {
 public:
  Stepper(const GridSpec& grid, const SimParams& params) : grid_(grid), params_(params) {}

  // Nonlinear and buoyancy terms; also reports the transporting velocity.
  Pair rhs(const Pair& a, std::array<Spectrum, 2>& velocity) const {
    Spectrum wt = a.w, rt = a.r;
    if (params_.dealias) {
      spectral::truncate_two_thirds(wt);
      spectral::truncate_two_thirds(rt);
    }
    Spectrum buoyancy = spectral::apply_multiplier(a.r, [](const spectral::Mode& m) { return kI * m.k1_odd; });
    if (params_.freeze_velocity) {
      velocity = {Spectrum(grid_), Spectrum(grid_)};
      return {std::move(buoyancy), Spectrum(grid_)};
    }
    velocity = {spectral::biot_savart_component(wt, 1), spectral::biot_savart_component(wt, 2)};
    const auto d1 = [](const spectral::Mode& m) { return kI * m.k1_odd; };
    const auto d2 = [](const spectral::Mode& m) { return kI * m.k2_odd; };
    const auto v1 = fft::inverse(velocity[0]);
    const auto v2 = fft::inverse(velocity[1]);
    const auto w1 = fft::inverse(spectral::apply_multiplier(wt, d1));
    const auto w2 = fft::inverse(spectral::apply_multiplier(wt, d2));
    const auto r1 = fft::inverse(spectral::apply_multiplier(rt, d1));
    const auto r2 = fft::inverse(spectral::apply_multiplier(rt, d2));
    std::vector<double> aw(v1.size()), ar(v1.size());
    for (std::size_t k = 0; k < v1.size(); ++k) {
      aw[k] = v1[k] * w1[k] + v2[k] * w2[k];
      ar[k] = v1[k] * r1[k] + v2[k] * r2[k];
    }
    Spectrum nw = fft::forward(grid_, aw), nr = fft::forward(grid_, ar);
    if (params_.dealias) {
      spectral::truncate_two_thirds(nw);
      spectral::truncate_two_thirds(nr);
    }
    nw *= -1.0;
    nr *= -1.0;
    nw += buoyancy;
    return {std::move(nw), std::move(nr)};
  }

  Pair advance(const Pair& a, double h, StepRecord* record) const {
    const auto ew_half = decay_factors(grid_, params_.mu, 0.5 * h);
    const auto er_half = decay_factors(grid_, params_.kappa, 0.5 * h);
    std::vector<double> ew(ew_half.size()), er(er_half.size());
    for (std::size_t k = 0; k < ew.size(); ++k) {
      ew[k] = ew_half[k] * ew_half[k];
      er[k] = er_half[k] * er_half[k];
    }
    std::array<std::array<Spectrum, 2>, 4> vel{{{Spectrum(grid_), Spectrum(grid_)},
                                                {Spectrum(grid_), Spectrum(grid_)},
                                                {Spectrum(grid_), Spectrum(grid_)},
                                                {Spectrum(grid_), Spectrum(grid_)}}};
    const Pair k1 = rhs(a, vel[0]);
    const Pair u2{combine(a.w, &ew_half, 0.5 * h, k1.w, &ew_half), combine(a.r, &er_half, 0.5 * h, k1.r, &er_half)};
    const Pair k2 = rhs(u2, vel[1]);
    const Pair u3{combine(a.w, &ew_half, 0.5 * h, k2.w, nullptr), combine(a.r, &er_half, 0.5 * h, k2.r, nullptr)};
    const Pair k3 = rhs(u3, vel[2]);
    const Pair u4{combine(a.w, &ew, h, k3.w, &ew_half), combine(a.r, &er, h, k3.r, &er_half)};
    const Pair k4 = rhs(u4, vel[3]);

    auto finish = [&](const Spectrum& y, const Spectrum& s1, const Spectrum& s2, const Spectrum& s3,
                      const Spectrum& s4, const std::vector<double>& full, const std::vector<double>& half) {
      Spectrum out(grid_);
      auto dy = y.data();
      auto d1 = s1.data(), d2 = s2.data(), d3 = s3.data(), d4 = s4.data();
      auto dst = out.data();
      for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] = full[k] * dy[k] + (h / 6.0) * (full[k] * d1[k] + 2.0 * half[k] * (d2[k] + d3[k]) + d4[k]);
      }
      return out;
    };
    Pair next{finish(a.w, k1.w, k2.w, k3.w, k4.w, ew, ew_half), finish(a.r, k1.r, k2.r, k3.r, k4.r, er, er_half)};
    if (record != nullptr) record->velocity = std::move(vel);
    return next;
  }

 private:
  GridSpec grid_;
  SimParams params_;
};

double grad_v_sup(const ScalarField& omega) {
  return spectral::velocity_gradient_sup(spectral::biot_savart(omega));
}

double grad_lp(const ScalarField& f, double p) { return spectral::lp_norm(spectral::gradient(f), p); }

}  // namespace

void SimParams::validate() const {
  if (!(mu >= 0.0) || !(kappa >= 0.0)) throw std::invalid_argument("SimParams: mu and kappa must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("SimParams: dt must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("SimParams: horizon must be >= 0");
  if (!(cfl_cap > 0.0)) throw std::invalid_argument("SimParams: cfl_cap must be positive");
  if (!(grad_rho_p >= 1.0)) throw std::invalid_argument("SimParams: grad_rho_p must be >= 1");
}

double cfl_limit(const SimState& state, const SimParams& params) {
  if (params.freeze_velocity) return HUGE_VAL;
  const auto v = spectral::biot_savart(state.omega);
  double speed = 0.0;
  for (std::size_t k = 0; k < v.u1.values().size(); ++k) {
    speed = std::max(speed, std::abs(v.u1.values()[k]) + std::abs(v.u2.values()[k]));
  }
  return speed > 0.0 ? params.cfl_cap * state.omega.grid().dx() / speed : HUGE_VAL;
}

SimState advance(const SimState& state, const SimParams& params, double h, const StepObserver& observer) {
  require_same_grid(state.omega.grid(), state.rho.grid(), "solver::advance");
  if (!(h > 0.0)) throw std::invalid_argument("solver::advance: step must be positive");
  const GridSpec& grid = state.omega.grid();
  Stepper stepper(grid, params);
  const Spectrum blank(grid);
  StepRecord record{state.t, h, {{{blank, blank}, {blank, blank}, {blank, blank}, {blank, blank}}}};
  const Pair next = stepper.advance({state.omega.spectrum(), state.rho.spectrum()}, h, observer ? &record : nullptr);
  SimState out{ScalarField::from_spectrum(next.w), ScalarField::from_spectrum(next.r), state.t + h};
  if (!out.omega.all_finite() || !out.rho.all_finite()) {
    throw SolverError("solver: non-finite field at t = " + std::to_string(out.t), state);
  }
  if (observer) observer(record);
  return out;
}

SimState step(const SimState& state, const SimParams& params, const StepObserver& observer) {
  params.validate();
  const double limit = cfl_limit(state, params);
  double h = params.dt;
  while (h > limit) h *= 0.5;
  return advance(state, params, h, observer);
}

Trajectory run(const SimState& init, const SimParams& params, const std::vector<double>& sample_times,
               const StepObserver& observer) {
  params.validate();
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    const double ts = sample_times[k];
    if (ts < init.t || ts > params.horizon * (1.0 + 1e-12) || (k > 0 && ts < sample_times[k - 1])) {
      throw std::invalid_argument("solver::run: sample times must be nondecreasing within [t0, horizon]");
    }
  }
  Trajectory traj;
  Diagnostics& diag = traj.diagnostics;
  diag.rho_linf_initial = init.rho.max_abs();

  SimState state = init;
  double gv = grad_v_sup(state.omega);
  double gr = grad_lp(state.rho, params.grad_rho_p);
  double v_integral = 0.0, gr_integral = 0.0;

  auto record = [&](const SimState& s) {
    traj.times.push_back(s.t);
    traj.omega.push_back(s.omega);
    traj.rho.push_back(s.rho);
    const double rho_inf = s.rho.max_abs();
    if (diag.rho_linf_initial > 0.0) {
      diag.max_principle_excess = std::max(diag.max_principle_excess, rho_inf / diag.rho_linf_initial - 1.0);
    }
    diag.rows.push_back({s.t, spectral::lp_norm(s.omega, 2.0), s.omega.max_abs(), spectral::lp_norm(s.rho, 1.0),
                         spectral::lp_norm(s.rho, 2.0), rho_inf, gv, v_integral, gr_integral, s.omega.integral(),
                         spectral::lp_norm(spectral::biot_savart(s.omega), 2.0), traj.steps});
  };

  for (double ts : sample_times) {
    const double eps = 1e-12 * std::max(1.0, std::abs(ts));
    while (state.t < ts - eps) {
      const double limit = cfl_limit(state, params);
      double h = params.dt;
      while (h > limit) h *= 0.5;
      if (state.t + h > ts - eps) h = ts - state.t;
      SimState next = advance(state, params, h, observer);
      next.t = (std::abs(next.t - ts) <= eps) ? ts : next.t;
      const double gv_next = grad_v_sup(next.omega);
      const double gr_next = grad_lp(next.rho, params.grad_rho_p);
      v_integral += 0.5 * h * (gv + gv_next);
      gr_integral += 0.5 * h * (gr + gr_next);
      gv = gv_next;
      gr = gr_next;
      state = std::move(next);
      ++traj.steps;
      traj.dt_history.push_back(h);
    }
    record(state);
  }
  return traj;
}

ScalarField gamma_field(const SimState& state, double mu) {
  return (1.0 - mu) * state.omega - spectral::singular_L(state.rho);
}

ScalarField commutator_H(const SimState& state) {
  const auto v = spectral::biot_savart(state.omega);
  const ScalarField lrho = spectral::singular_L(state.rho);
  return spectral::singular_L(spectral::advect(v, state.rho)) - spectral::advect(v, lrho);
}

CommutatorMonitor commutator_monitor(const SimState& state, const lp::DyadicPartition& partition, double epsilon,
                                     double p) {
  const ScalarField h = commutator_H(state);
  const double holder = lp::holder_norm(h, epsilon, partition);
  const auto v = spectral::biot_savart(state.omega);
  const double bound = spectral::lp_norm(v, 2.0) * spectral::lp_norm(state.rho, 2.0) +
                       (spectral::lp_norm(state.omega, 2.0) + state.omega.max_abs()) * spectral::lp_norm(state.rho, p);
  return {holder, bound, bound > 0.0 ? holder / bound : 0.0};
}

GammaResidual gamma_residual(const std::vector<SimState>& states, double mu) {
  if (states.size() != 3) throw std::invalid_argument("gamma_residual: need exactly three consecutive states");
  const double h0 = states[1].t - states[0].t, h1 = states[2].t - states[1].t;
  if (!(h0 > 0.0) || std::abs(h1 - h0) > 1e-9 * h0) {
    throw std::invalid_argument("gamma_residual: states must be equally spaced in time");
  }
  const ScalarField g0 = gamma_field(states[0], mu);
  const ScalarField g1 = gamma_field(states[1], mu);
  const ScalarField g2 = gamma_field(states[2], mu);
  const ScalarField dt_gamma = (0.5 / h0) * (g2 - g0);
  const auto v = spectral::biot_savart(states[1].omega);
  const ScalarField adv = spectral::advect(v, g1);
  const ScalarField lap = spectral::laplacian(g1);
  const ScalarField h = commutator_H(states[1]);
  const ScalarField res = dt_gamma + adv - mu * lap - h;
  const double r = spectral::lp_norm(res, 2.0);
  const double scale = spectral::lp_norm(h, 2.0) + spectral::lp_norm(adv, 2.0) + mu * spectral::lp_norm(lap, 2.0);
  return {r, scale, scale > 0.0 ? r / scale : r};
}

ScalarField taylor_green(const GridSpec& grid, int mode, double amplitude) {
  const double k = mode * grid.fundamental();
  return ScalarField::sample(grid, [=](double x1, double x2) { return amplitude * std::sin(k * x1) * std::sin(k * x2); });
}

}  // namespace strato::solver
